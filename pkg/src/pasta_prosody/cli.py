"""Command line interface.

Exit codes: 0 success, 1 validation/usage error, 2 runtime or data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .clustering import ClusterModel, Metric
from .errors import PastaError, ValidationError
from .intsint import (
    ACCENT_FOR_TYPE,
    CommunicativeType,
    IntsintMark,
    IntsintParams,
    PitchAccent,
    Tone,
    ToRIAccent,
    build_pseudo_timeline,
    synthesize_markup,
    tori_to_intsint,
)
from .momel import MomelSpline
from .patterns import PatternMatrix
from .pipeline import (
    TrainConfig,
    export_dataset,
    read_markup,
    run_markup,
    run_train,
)
from .pitch import NormalizationMode


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pasta", description="Word-wise intonation model toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit splines over a corpus and train the cluster model")
    p_train.add_argument("--manifest", required=True)
    p_train.add_argument("--k", type=int, default=24)
    p_train.add_argument("--s", type=int, default=5)
    p_train.add_argument("--metric", choices=[m.value for m in Metric], default="dtw")
    p_train.add_argument("--n-f0", type=int, default=32)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--norm", choices=[m.value for m in NormalizationMode], default="phrase")
    p_train.add_argument("--max-iter", type=int, default=50)
    p_train.add_argument("--dba-iter", type=int, default=10)
    p_train.add_argument("--out", required=True, help="model JSON path")
    p_train.add_argument("--matrix-out", help="pattern matrix JSONL path")
    p_train.add_argument("--plot-dir", help="also render barycenter panels here")

    p_markup = sub.add_parser("markup", help="label a corpus with a trained model")
    p_markup.add_argument("--manifest", required=True)
    p_markup.add_argument("--model", required=True)
    p_markup.add_argument("--out", required=True, help="markup JSONL path")
    p_markup.add_argument("--plot-dir", help="also render per-utterance panels here")

    p_synth = sub.add_parser("synth", help="rule-based markup synthesis from a text plan")
    p_synth.add_argument("--text-plan", required=True)
    p_synth.add_argument("--model", required=True)
    p_synth.add_argument("--out", required=True, help="labels JSON path")

    p_export = sub.add_parser("export-dataset", help="merge markup with manifest texts")
    p_export.add_argument("--markup", required=True)
    p_export.add_argument("--manifest", required=True)
    p_export.add_argument("--out", required=True)

    p_plot = sub.add_parser("plot", help="render SVG figures for saved artifacts")
    p_plot.add_argument("--model", help="model JSON to plot (barycenter panels)")
    p_plot.add_argument("--matrix", help="pattern matrix JSONL to overlay as members")
    p_plot.add_argument("--spline", help="spline JSON to plot")
    p_plot.add_argument("--markup", help="markup JSONL to plot (requires --model)")
    p_plot.add_argument("--out-dir", required=True)
    return parser


def _cmd_train(args) -> int:
    config = TrainConfig(
        k=args.k,
        s=args.s,
        metric=Metric(args.metric),
        n_f0=args.n_f0,
        seed=args.seed,
        norm_mode=NormalizationMode(args.norm),
        max_iter=args.max_iter,
        dba_iter=args.dba_iter,
    )
    model, matrix, skipped = run_train(
        args.manifest, config, model_out=args.out, matrix_out=args.matrix_out
    )
    for utt, reason in skipped:
        print(f"skipped {utt}: {reason}", file=sys.stderr)
    print(f"trained k={model.k} s={model.s} on {len(matrix)} patterns -> {args.out}")
    if args.plot_dir:
        from .plotting import plot_barycenters

        out = Path(args.plot_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = plot_barycenters(model, out / "barycenters.svg", matrix)
        print(f"wrote {path}")
    return 0


def _cmd_markup(args) -> int:
    model = ClusterModel.load(args.model)
    records, skipped = run_markup(args.manifest, model, out_path=args.out)
    for utt, reason in skipped:
        print(f"skipped {utt}: {reason}", file=sys.stderr)
    print(f"marked up {len(records)} utterances -> {args.out}")
    if args.plot_dir:
        from .plotting import plot_markup

        out = Path(args.plot_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = plot_markup(records, model, out / "markup.svg")
        print(f"wrote {path}")
    return 0


def _parse_plan(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PastaError(f"{path}: invalid JSON: {exc}") from exc


def _plan_to_marks(plan: dict) -> tuple[list[IntsintMark], "object"]:
    if "words" not in plan or not plan["words"]:
        raise ValidationError('plan needs a non-empty "words" array')
    phone_counts = []
    stress_idx = []
    for w in plan["words"]:
        count = w.get("phone_count")
        if count is None:
            count = sum(ch.isalnum() for ch in w.get("word", "")) or 1
        phone_counts.append(int(count))
        stress_idx.append(w.get("stressed_phone_index"))
    timeline = build_pseudo_timeline(
        phone_counts,
        stress_idx,
        mean_phone_s=float(plan.get("mean_phone_s", 0.08)),
    )
    if "marks" in plan:
        marks = [IntsintMark.from_dict(m) for m in plan["marks"]]
        return marks, timeline
    if "accent" in plan:
        accent = PitchAccent(plan["accent"])
    elif "communicative_type" in plan:
        accent = ACCENT_FOR_TYPE[CommunicativeType(plan["communicative_type"])]
    else:
        raise ValidationError('plan needs "marks", "accent" or "communicative_type"')
    nucleus = int(plan.get("nucleus_word_index", len(plan["words"]) - 1))
    initial = Tone(plan.get("initial_tone", "M"))
    marks = tori_to_intsint(
        ToRIAccent(accent=accent, nucleus_word_index=nucleus),
        timeline,
        initial_tone=initial,
        exclaim_to_bottom=bool(plan.get("exclaim_to_bottom", False)),
    )
    return marks, timeline


def _cmd_synth(args) -> int:
    model = ClusterModel.load(args.model)
    plan = _parse_plan(args.text_plan)
    marks, timeline = _plan_to_marks(plan)
    params = IntsintParams(
        key=float(plan.get("key", 1.0)), range=float(plan.get("range", 2.0 / 3.0))
    )
    labels = synthesize_markup(marks, timeline, model, params)
    doc = {
        "marks": [m.to_dict() for m in marks],
        "labels": [
            {
                "word": plan["words"][i].get("word", f"w{i}"),
                "pattern": lab.pattern_id,
                "state": lab.state_id,
            }
            for i, lab in enumerate(labels)
        ],
    }
    Path(args.out).write_text(json.dumps(doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    print(f"synthesized {len(labels)} word labels -> {args.out}")
    return 0


def _cmd_export(args) -> int:
    lines = export_dataset(args.markup, args.manifest, out_path=args.out)
    print(f"exported {len(lines)} sentences -> {args.out}")
    return 0


def _cmd_plot(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    wrote = []
    if args.model and not args.markup:
        from .plotting import plot_barycenters

        model = ClusterModel.load(args.model)
        matrix = PatternMatrix.load(args.matrix) if args.matrix else None
        if matrix is not None:
            from .clustering import assign

            model.labels_ = [assign(model, r) for r in matrix.rows]
        wrote.append(plot_barycenters(model, out_dir / "barycenters.svg", matrix))
    if args.spline:
        from .plotting import plot_spline

        wrote.append(plot_spline(MomelSpline.load(args.spline), out_dir / "spline.svg"))
    if args.markup:
        if not args.model:
            raise ValidationError("--markup needs --model")
        from .plotting import plot_markup

        model = ClusterModel.load(args.model)
        wrote.append(plot_markup(read_markup(args.markup), model, out_dir / "markup.svg"))
    if not wrote:
        raise ValidationError("nothing to plot: give --model, --spline and/or --markup")
    for path in wrote:
        print(f"wrote {path}")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "markup": _cmd_markup,
    "synth": _cmd_synth,
    "export-dataset": _cmd_export,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PastaError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
