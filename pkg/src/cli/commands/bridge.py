"""bridgewalk bridge: one Monte Carlo range summary."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Iterator, Sequence

from pydantic import BaseModel

from bridgewalk.range_stats import RangeSummary, mc_range_experiment
from bridgewalk.walk_models import make_model
from cli.commands.base import BaseCommand, add_model_arguments
from cli.schemas import BridgePayload
from cli.services.output import write_csv, write_jsonl
from config import Settings


def path_records(summaries: Sequence[RangeSummary]) -> Iterator[dict[str, object]]:
    """One JSON Lines record per sampled path."""
    for summary in summaries:
        for outcome in summary.outcomes:
            yield {
                "n": summary.n,
                "seed": summary.seed,
                "trial": outcome.trial,
                "range": outcome.range,
                "max_distance": outcome.max_distance,
                "weight": outcome.weight,
                "path": list(outcome.keys),
            }


def write_summaries(
    out: Path, summaries: Sequence[RangeSummary], dump_paths: Path | None
) -> None:
    ordered = sorted(summaries, key=lambda s: (s.model, s.n))
    write_csv(out, RangeSummary.CSV_COLUMNS, (s.as_row() for s in ordered))
    if dump_paths is not None:
        write_jsonl(dump_paths, path_records(ordered))


class BridgeCommand(BaseCommand):
    """Sample bridges (or free walks) of one length and summarise R_n and D_n."""

    name = "bridge"
    help = "Monte Carlo range summary at a single n"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_model_arguments(parser)
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--trials", type=int, required=True)
        parser.add_argument("--seed", type=int, required=True)
        parser.add_argument("--out", required=True)
        parser.add_argument("--dump-paths", dest="dump_paths")
        parser.add_argument("--mode", choices=["bridge", "unconditioned"])
        parser.add_argument(
            "--sampling",
            choices=["rejection", "importance"],
            help="lamplighter bridges: accept/reject or weight by 2^-N_n",
        )
        parser.add_argument("--workers", type=int)

    def request_model(self) -> type[BaseModel]:
        return BridgePayload

    def run(self, payload: BridgePayload, settings: Settings) -> int:
        model = make_model(payload.to_spec())
        summary = mc_range_experiment(
            model,
            payload.n,
            payload.trials,
            mode=payload.mode,
            seed=payload.seed,
            workers=payload.workers or settings.workers,
            collect_paths=payload.dump_paths is not None,
            settings=settings,
            sampling=payload.sampling,
        )
        write_summaries(payload.out, [summary], payload.dump_paths)
        return 0
