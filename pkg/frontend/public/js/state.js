// Client-side mirror of a quiz session. It never sees correct answers and
// performs no scoring; it only tracks what the server has confirmed.
export function newSession(id, subject, phase, questions) {
    return { id, subject, phase, questions, answered: new Map(), result: null };
}
export function currentQuestion(session) {
    return session.questions.find((q) => !session.answered.has(q.id)) ?? null;
}
export function progress(session) {
    return { answered: session.answered.size, total: session.questions.length };
}
export function isComplete(session) {
    return session.answered.size === session.questions.length;
}
