// DOM rendering. Each view is a pure projection of server-confirmed state;
// handlers are injected by the app shell.
import { currentQuestion, progress } from "./state.js";
function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
export function renderHome(root, subjects, onStart) {
    root.replaceChildren();
    const card = el("section", "card home-view");
    card.append(el("h1", "title", "Find your course"));
    card.append(el("p", "subtitle", "Answer a short placement quiz and get a course recommendation matched to your level."));
    const nameLabel = el("label", "field-label", "Your name");
    const nameInput = el("input", "name-input");
    nameInput.type = "text";
    nameInput.placeholder = "e.g. Priya";
    nameLabel.append(nameInput);
    const subjectLabel = el("label", "field-label", "Subject");
    const select = el("select", "subject-select");
    for (const subject of subjects) {
        const option = el("option", undefined, subject);
        option.value = subject;
        select.append(option);
    }
    subjectLabel.append(select);
    const start = el("button", "primary start-button", "Start quiz");
    start.disabled = true;
    nameInput.addEventListener("input", () => {
        start.disabled = nameInput.value.trim() === "";
    });
    start.addEventListener("click", () => onStart(nameInput.value.trim(), select.value));
    card.append(nameLabel, subjectLabel, start);
    root.append(card);
}
export function renderQuiz(root, session, onAnswer) {
    root.replaceChildren();
    const card = el("section", "card quiz-view");
    const { answered, total } = progress(session);
    const header = el("header", "quiz-header");
    header.append(el("span", "subject-badge", session.subject));
    header.append(el("span", "progress-text", `${answered} / ${total} answered`));
    card.append(header);
    const strip = el("div", "progress-strip");
    for (const q of session.questions) {
        const dot = el("span", session.answered.has(q.id) ? "progress-dot done" : "progress-dot");
        dot.title = q.id;
        strip.append(dot);
    }
    card.append(strip);
    const question = currentQuestion(session);
    if (question === null) {
        card.append(el("p", "quiz-finishing", "All questions answered, scoring..."));
        root.append(card);
        return;
    }
    const body = el("div", "question-body");
    body.append(el("span", `level-badge level-${question.level}`, question.level));
    body.append(el("p", "prompt", question.prompt));
    const list = el("div", "options");
    question.options.forEach((text, index) => {
        const button = el("button", "option-button", text);
        button.addEventListener("click", () => {
            for (const b of list.querySelectorAll("button"))
                b.disabled = true;
            onAnswer(question, index);
        });
        list.append(button);
    });
    body.append(list);
    card.append(body);
    root.append(card);
}
export function renderResult(root, result, phase, onFollowUp, onRestart) {
    root.replaceChildren();
    const card = el("section", "card result-view");
    const f = result.features;
    card.append(el("h1", "title", phase === "followup" ? "Your performance" : "Your recommendation"));
    const features = el("dl", "features");
    const pairs = [
        ["Basic correct", String(f.bla)],
        ["Medium correct", String(f.mla)],
        ["High correct", String(f.hla)],
        ["Average score", String(f.avg_score)],
    ];
    for (const [label, value] of pairs) {
        features.append(el("dt", undefined, label));
        features.append(el("dd", undefined, value));
    }
    card.append(features);
    if (phase === "followup") {
        const score = el("div", "performance-card");
        score.dataset.performance = String(result.performance_score);
        score.append(el("p", "performance-score", `Performance score: ${result.performance_score} / 10`));
        card.append(score);
        const back = el("button", "primary restart-button", "Back to start");
        back.addEventListener("click", onRestart);
        card.append(back);
    }
    else if (result.recommendation) {
        const r = result.recommendation;
        const rec = el("div", "recommendation-card");
        rec.dataset.course = r.course;
        rec.dataset.level = r.level;
        rec.dataset.confidence = String(r.confidence);
        rec.append(el("p", "rec-course", r.course));
        rec.append(el("p", "rec-level", r.level));
        rec.append(el("p", "rec-confidence", `confidence ${r.confidence}`));
        card.append(rec);
        const followUp = el("button", "primary followup-button", "Take the follow-up quiz");
        followUp.addEventListener("click", onFollowUp);
        const back = el("button", "secondary restart-button", "Start over");
        back.addEventListener("click", onRestart);
        card.append(followUp, back);
    }
    root.append(card);
}
export function renderError(root, message, onRetry) {
    const existing = root.querySelector(".error-banner");
    existing?.remove();
    const banner = el("div", "error-banner");
    banner.append(el("span", "error-message", message));
    const retry = el("button", "retry-button", "Retry");
    retry.addEventListener("click", () => {
        banner.remove();
        onRetry();
    });
    banner.append(retry);
    root.prepend(banner);
}
export function renderLoading(root, message) {
    root.replaceChildren(el("p", "loading", message));
}
