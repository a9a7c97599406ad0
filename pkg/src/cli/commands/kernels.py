"""bridgewalk kernels: u_n, f_n and partial sums of F as CSV."""

from __future__ import annotations

import argparse
import logging
from typing import Any

from pydantic import BaseModel

from bridgewalk.kernels import (
    escape_probability,
    first_return_probabilities,
    return_probabilities,
    spectral_radius_estimate,
    with_F_at_rho,
)
from bridgewalk.walk_models import make_model
from cli.commands.base import BaseCommand, add_model_arguments
from cli.schemas import KernelsPayload
from cli.services.output import write_csv, write_json
from config import Settings

logger = logging.getLogger("bridgewalk.cli.kernels")

COLUMNS = ("n", "u", "log_u", "f", "F_partial")


class KernelsCommand(BaseCommand):
    """Return and first-return probabilities of one walk."""

    name = "kernels"
    help = "emit n,u,log_u,f,F_partial for n = 0..nmax"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_model_arguments(parser)
        parser.add_argument("--nmax", type=int, required=True)
        parser.add_argument("--out", required=True)
        parser.add_argument("--summary", help="also write the decay profile and F as JSON")
        parser.add_argument("--method", choices=["exact", "monte_carlo"])
        parser.add_argument("--trials", type=int, help="Monte Carlo trials")
        parser.add_argument("--seed", type=int, help="Monte Carlo seed")

    def request_model(self) -> type[BaseModel]:
        return KernelsPayload

    def run(self, payload: KernelsPayload, settings: Settings) -> int:
        model = make_model(payload.to_spec())
        u = return_probabilities(
            model,
            payload.nmax,
            method=payload.method,
            trials=payload.trials,
            seed=payload.seed,
            settings=settings,
        )
        # Sampling noise breaks the renewal inversion, so estimated sequences carry no f.
        f = first_return_probabilities(u) if u.method == "exact" else None
        nan = float("nan")
        rows = (
            {
                "n": n,
                "u": float(u.u[n]),
                "log_u": float(u.log_u[n]),
                "f": float(f.f[n]) if f is not None else nan,
                "F_partial": float(f.partial[n]) if f is not None else nan,
            }
            for n in range(len(u))
        )
        write_csv(payload.out, COLUMNS, rows)
        if payload.summary is not None and f is not None:
            write_json(payload.summary, self._summary(model.model_id, u, f))
        return 0

    @staticmethod
    def _summary(model_id: str, u, f) -> dict[str, Any]:
        out: dict[str, Any] = {"model": model_id, "nmax": u.N, "method": u.method}
        try:
            profile = spectral_radius_estimate(u)
        except ValueError as exc:
            logger.warning("No decay profile for %s: %s", model_id, exc)
            profile = None
        report = escape_probability(f, profile)
        if profile is not None:
            out["generating"] = with_F_at_rho(profile, f).to_dict()
        out["escape"] = {
            "partial_sum": report.partial_sum,
            "tail_estimate": report.tail_estimate,
            "estimate": report.estimate,
            "stabilized": report.stabilized,
            "inconclusive": report.inconclusive,
            "recurrent": report.recurrent,
            "tail_model": report.tail_model,
        }
        return out
