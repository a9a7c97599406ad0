"""bridgewalk experiment: a range experiment over an n grid from a JSON config."""

from __future__ import annotations

import argparse
import logging

from pydantic import BaseModel

from bridgewalk.range_stats import mc_range_experiment
from bridgewalk.walk_models import make_model
from cli.commands.base import BaseCommand
from cli.commands.bridge import write_summaries
from cli.schemas import ExperimentPayload, load_config
from config import Settings

logger = logging.getLogger("bridgewalk.cli.experiment")


class ExperimentCommand(BaseCommand):
    name = "experiment"
    help = "run the experiment described by a JSON config"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--config", required=True)
        parser.add_argument("--workers", type=int, help="override the config's worker count")

    def request_model(self) -> type[BaseModel]:
        return ExperimentPayload

    def run(self, payload: ExperimentPayload, settings: Settings) -> int:
        config = load_config(payload.config)
        logger.info("Experiment config: %s", config.model_dump_json())
        settings = settings.with_budgets(config.budgets)
        model = make_model(config.to_spec())
        workers = payload.workers or config.workers
        summaries = [
            mc_range_experiment(
                model,
                n,
                config.trials,
                mode=config.mode,
                seed=config.seed,
                workers=workers,
                collect_paths=config.dump_paths is not None,
                settings=settings,
                sampling=config.sampling,
            )
            for n in config.n_grid
        ]
        write_summaries(config.out, summaries, config.dump_paths)
        return 0
