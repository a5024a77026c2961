// App shell: wires the API client, session state and views together.
//
// All network actions flow through a single promise chain, so at most one
// request is in flight and answers are submitted in click order. A failure
// renders a retry banner that re-runs the same action; answer submissions
// are safe to retry because the server's duplicate rejection is absorbed.
// The session id persists in storage, so a reload resumes from the server's
// view of the session (the log, not the client, is the source of truth).
import { currentQuestion, isComplete, newSession } from "./state.js";
import { renderError, renderHome, renderLoading, renderQuiz, renderResult } from "./views.js";
const STORAGE_KEY = "edurec.session";
export class App {
    constructor(root, api, storage) {
        this.root = root;
        this.api = api;
        this.storage = storage;
        this.session = null;
        this.student = "";
        this.chain = Promise.resolve();
    }
    /** Resolves when every queued action has settled; test hook. */
    whenIdle() {
        return this.chain.then(() => undefined);
    }
    start() {
        return this.enqueue(() => this.boot());
    }
    enqueue(action) {
        const run = () => action().catch((err) => {
            const message = err instanceof Error ? err.message : String(err);
            renderError(this.root, message, () => void this.enqueue(action));
        });
        this.chain = this.chain.then(run, run);
        return this.chain;
    }
    async boot() {
        renderLoading(this.root, "Loading...");
        const stored = this.storage.getItem(STORAGE_KEY);
        if (stored) {
            try {
                await this.resume(stored);
                return;
            }
            catch {
                this.storage.removeItem(STORAGE_KEY); // stale or unknown session
            }
        }
        await this.showHome();
    }
    async showHome() {
        const subjects = await this.api.getSubjects();
        renderHome(this.root, subjects, (student, subject) => {
            this.student = student;
            void this.enqueue(() => this.beginSession(student, subject, "prerequisite"));
        });
    }
    async resume(sessionId) {
        const view = await this.api.getSession(sessionId);
        const session = newSession(view.session_id, view.subject, view.phase, view.questions);
        for (const [questionId, option] of Object.entries(view.answers)) {
            session.answered.set(questionId, option);
        }
        session.result = view.result;
        this.session = session;
        this.student = view.student;
        if (view.status === "scored" && view.result) {
            this.showResult();
            return;
        }
        if (isComplete(session)) {
            await this.finalize();
            return;
        }
        this.showQuiz();
    }
    async beginSession(student, subject, phase) {
        const created = await this.api.createSession(student, subject, phase);
        this.session = newSession(created.session_id, subject, phase, created.questions);
        this.storage.setItem(STORAGE_KEY, created.session_id);
        this.showQuiz();
    }
    showQuiz() {
        const session = this.session;
        if (!session)
            return;
        renderQuiz(this.root, session, (question, option) => {
            void this.enqueue(() => this.submitAnswer(question, option));
        });
    }
    async submitAnswer(question, option) {
        const session = this.session;
        if (!session || session.answered.has(question.id))
            return;
        await this.api.submitAnswer(session.id, question.id, option);
        // only mark locally once the server has acknowledged (or already had) it
        session.answered.set(question.id, option);
        if (currentQuestion(session) === null) {
            this.showQuiz(); // "scoring..." frame while finalize runs
            await this.finalize();
            return;
        }
        this.showQuiz();
    }
    async finalize() {
        const session = this.session;
        if (!session)
            return;
        session.result = await this.api.finalize(session.id);
        this.showResult();
    }
    showResult() {
        const session = this.session;
        if (!session?.result)
            return;
        renderResult(this.root, session.result, session.phase, () => {
            void this.enqueue(() => this.beginSession(this.student, session.subject, "followup"));
        }, () => {
            this.storage.removeItem(STORAGE_KEY);
            this.session = null;
            void this.enqueue(() => this.showHome());
        });
    }
}
export function createApp(root, api, storage) {
    const app = new App(root, api, storage);
    void app.start();
    return app;
}
