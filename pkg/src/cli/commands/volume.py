"""bridgewalk volume: ball sizes V(n) by breadth-first search."""

from __future__ import annotations

import argparse

from pydantic import BaseModel

from bridgewalk.walk_models import ball_volume, make_model
from cli.commands.base import BaseCommand, add_model_arguments
from cli.schemas import VolumePayload
from cli.services.output import write_csv
from config import Settings

COLUMNS = ("n", "volume")


class VolumeCommand(BaseCommand):
    name = "volume"
    help = "n,volume for n = 0..nmax"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_model_arguments(parser)
        parser.add_argument("--nmax", type=int, required=True)
        parser.add_argument("--out", required=True)

    def request_model(self) -> type[BaseModel]:
        return VolumePayload

    def run(self, payload: VolumePayload, settings: Settings) -> int:
        model = make_model(payload.to_spec())
        curve = ball_volume(model, payload.nmax, max_keys=settings.bfs_max_keys)
        write_csv(
            payload.out,
            COLUMNS,
            ({"n": n, "volume": v} for n, v in enumerate(curve.volumes)),
        )
        return 0
