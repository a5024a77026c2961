// Client-side mirror of a quiz session. It never sees correct answers and
// performs no scoring; it only tracks what the server has confirmed.

import type { FinalizeResult, QuestionView } from "./api.js";

export interface ClientSession {
  id: string;
  subject: string;
  phase: string;
  questions: QuestionView[];
  answered: Map<string, number>; // only server-acknowledged answers
  result: FinalizeResult | null;
}

export function newSession(
  id: string,
  subject: string,
  phase: string,
  questions: QuestionView[],
): ClientSession {
  return { id, subject, phase, questions, answered: new Map(), result: null };
}

export function currentQuestion(session: ClientSession): QuestionView | null {
  return session.questions.find((q) => !session.answered.has(q.id)) ?? null;
}

export function progress(session: ClientSession): { answered: number; total: number } {
  return { answered: session.answered.size, total: session.questions.length };
}

export function isComplete(session: ClientSession): boolean {
  return session.answered.size === session.questions.length;
}
