"""Script entry points: render-survey and render-noise-curves."""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render_noise_curves, render_survey


def main_survey(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-survey",
        description="Density figure of a channel survey with the soundness bound",
    )
    parser.add_argument("--csv", required=True, help="survey CSV from `gatequiz survey`")
    parser.add_argument("--imax", type=int, required=True)
    parser.add_argument("--pc", type=float, required=True,
                        help="classical floor from `gatequiz pfa-opt`")
    parser.add_argument("--alpha", type=float, default=None,
                        help="bound slope; must equal 1/(2*pc) when given")
    parser.add_argument("--external", default=None, help="ingest-eval CSV overlay")
    parser.add_argument("--curves", default=None, help="noise-curve CSV overlay")
    parser.add_argument("--xlim", type=float, nargs=2, default=(0.0, 0.6))
    parser.add_argument("--ylim", type=float, nargs=2, default=(0.0, 0.8))
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(
            survey_csv=args.csv, i_max=args.imax, p_c=args.pc, alpha=args.alpha,
            out_path=args.out, external_csv=args.external, curves_csv=args.curves,
            xlim=tuple(args.xlim), ylim=tuple(args.ylim),
        )
        render_survey(spec)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


def main_noise_curves(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-noise-curves",
        description="Per-family noise curves in the (p_fail, infidelity) plane",
    )
    parser.add_argument("--csv", required=True, help="CSV from `gatequiz noise-curve`")
    parser.add_argument("--imax", type=int, default=None,
                        help="require all four families and label the figure")
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        render_noise_curves(args.csv, args.out, i_max=args.imax)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main_survey())
