"""Command-line entry point: every workflow without the service or web client.

Exit codes: 0 success, 1 usage error, 2 data or model error. Diagnostics go
to stderr; data output goes to stdout or to the named files. Stochastic
subcommands require an explicit --seed, so every reported number is
reproducible from the flags alone.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from edurec.classifiers import ModelFormatError, load_model, save_model
from edurec.dataset import DatasetError, GeneratorConfig, generate_synthetic, load_csv, save_csv
from edurec.evaluation import (
    ALGORITHM_TAGS,
    AlgorithmSpec,
    EvaluationError,
    compare_algorithms,
    comparison_table,
    evaluate_holdout,
    evaluate_holdout_with_model,
    format_report,
    write_comparison_csv,
)
from edurec.recommend import (
    BankError,
    QuizSession,
    SessionError,
    load_question_bank,
    recommend,
    score_session,
    select_questions,
)
from edurec.service import ServiceConfigError, create_app, load_service_config

QUIZ_PER_LEVEL = 10


class CliParser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    parser = CliParser(prog="edurec", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", parser_class=CliParser)

    p = sub.add_parser("generate", help="write a synthetic labeled CSV dataset")
    p.add_argument("--out", required=True, type=Path, help="output CSV path")
    p.add_argument("--n", type=int, default=5000, help="number of rows (default 5000)")
    p.add_argument("--noise", type=float, default=0.15, help="level-flip probability (default 0.15)")
    p.add_argument("--seed", required=True, type=int, help="generator seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train a model, save its artifact, print the report")
    p.add_argument("--data", required=True, type=Path, help="training CSV")
    p.add_argument("--algo", required=True, choices=("dt", "rf", "nb"), help="algorithm")
    p.add_argument("--seed", required=True, type=int, help="split and training seed")
    p.add_argument("--out", required=True, type=Path, help="model artifact path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="hold-out evaluation of a saved model's algorithm")
    p.add_argument("--data", required=True, type=Path, help="dataset CSV")
    p.add_argument("--model", required=True, type=Path, help="model artifact to take algorithm/params from")
    p.add_argument("--seed", required=True, type=int, help="split and training seed")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="evaluate all three algorithms on one split")
    p.add_argument("--data", required=True, type=Path, help="dataset CSV")
    p.add_argument("--seed", required=True, type=int, help="split and training seed")
    p.add_argument("--out", type=Path, default=Path("."), help="directory for comparison.csv")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--config", required=True, type=Path, help="service config JSON")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("quiz", help="interactive terminal quiz against a saved model")
    p.add_argument("--bank", required=True, type=Path, help="question bank JSON")
    p.add_argument("--model", required=True, type=Path, help="model artifact")
    p.add_argument("--subject", required=True, help="quiz subject")
    p.add_argument("--seed", type=int, default=0, help="question sampling seed (default 0)")
    p.set_defaults(func=cmd_quiz)

    return parser


def cmd_generate(args) -> int:
    config = GeneratorConfig(n_records=args.n, noise_rate=args.noise, seed=args.seed)
    dataset = generate_synthetic(config)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    save_csv(dataset, args.out)
    print(f"wrote {len(dataset)} rows to {args.out}", file=sys.stderr)
    return 0


def cmd_train(args) -> int:
    dataset = load_csv(args.data)
    spec = AlgorithmSpec(args.algo)
    report, model = evaluate_holdout_with_model(
        dataset, spec, split_seed=args.seed, training_seed=args.seed
    )
    args.out.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, args.out)
    print(format_report(report))
    print(f"saved model artifact to {args.out}", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    dataset = load_csv(args.data)
    model = load_model(args.model)
    spec = AlgorithmSpec(ALGORITHM_TAGS[model.algorithm], model.params)
    report = evaluate_holdout(dataset, spec, split_seed=args.seed, training_seed=args.seed)
    print(format_report(report))
    return 0


def cmd_compare(args) -> int:
    dataset = load_csv(args.data)
    report = compare_algorithms(dataset, split_seed=args.seed, training_seed=args.seed)
    print(comparison_table(report))
    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / "comparison.csv"
    write_comparison_csv(report, csv_path)
    print(f"wrote {csv_path}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    config = load_service_config(args.config)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _ask_option(question, number, total) -> int:
    print(f"\n[{number}/{total}] ({question.level}) {question.prompt}")
    for i, option in enumerate(question.options, start=1):
        print(f"  {i}) {option}")
    while True:
        try:
            raw = input(f"answer 1-{len(question.options)}: ")
        except EOFError:
            raise SessionError("input ended before the quiz was complete") from None
        try:
            choice = int(raw.strip())
        except ValueError:
            print("please enter a number", file=sys.stderr)
            continue
        if 1 <= choice <= len(question.options):
            return choice - 1
        print(f"choose between 1 and {len(question.options)}", file=sys.stderr)


def cmd_quiz(args) -> int:
    bank = load_question_bank(args.bank)
    model = load_model(args.model)
    questions = select_questions(bank, args.subject, QUIZ_PER_LEVEL, args.seed)
    session = QuizSession(
        session_id=f"cli-{args.seed}",
        student="terminal",
        subject=args.subject,
        phase="prerequisite",
        question_ids=tuple(q.id for q in questions),
    )
    for number, question in enumerate(questions, start=1):
        session.record_answer(question.id, _ask_option(question, number, len(questions)))
    features = score_session(session, bank)
    rec = recommend(model, features)
    print()
    print(f"correct answers: basic {features.bla}, medium {features.mla}, high {features.hla}")
    print(f"average score:   {features.avg_score:.2f} / 10")
    print(f"recommendation:  {rec.course} ({rec.level}), confidence {rec.confidence:.2f}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.error("a subcommand is required")
    try:
        return args.func(args)
    except (
        DatasetError,
        BankError,
        SessionError,
        ModelFormatError,
        EvaluationError,
        ServiceConfigError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
