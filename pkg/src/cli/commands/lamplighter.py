"""bridgewalk lamplighter: projected-range law of lamplighter bridges over Z."""

from __future__ import annotations

import argparse
from typing import Iterator

from pydantic import BaseModel

from bridgewalk.bridge.lamplighter import (
    expected_projection_range,
    lamplighter_projection_pmf,
    projection_range_joint,
)
from cli.commands.base import BaseCommand
from cli.schemas import LamplighterPayload
from cli.services.output import write_csv
from config import Settings
from utils.errors import UnsupportedModelError

COLUMNS = ("n", "r", "q", "pmf", "expected_range")


def projection_rows(nmax: int, settings: Settings) -> Iterator[dict[str, object]]:
    for n in range(2, nmax + 1, 2):
        table = projection_range_joint(n, settings)
        pmf = lamplighter_projection_pmf(table)
        expected = expected_projection_range(table)
        for r in range(len(table.q)):
            if table.q[r] > 0:
                yield {
                    "n": n,
                    "r": r,
                    "q": float(table.q[r]),
                    "pmf": float(pmf[r]),
                    "expected_range": expected,
                }


class LamplighterCommand(BaseCommand):
    name = "lamplighter"
    help = "q_r table, P{N_n = r} and E{N_n} for even n <= nmax"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--dim", type=int, default=1)
        parser.add_argument("--nmax", type=int, required=True)
        parser.add_argument("--out", required=True)

    def request_model(self) -> type[BaseModel]:
        return LamplighterPayload

    def run(self, payload: LamplighterPayload, settings: Settings) -> int:
        if payload.dim != 1:
            raise UnsupportedModelError(
                f"projected-range tables exist for d=1 only, got d={payload.dim}"
            )
        write_csv(payload.out, COLUMNS, projection_rows(payload.nmax, settings))
        return 0
