from __future__ import annotations

import abc
import argparse
from typing import Any

from pydantic import BaseModel, ValidationError

from config import Settings
from utils.errors import UsageError

# Parser bookkeeping that never reaches a payload.
_GLOBAL_ARGS = frozenset({"command", "log_level"})


class BaseCommand(abc.ABC):
    name: str
    help: str = ""

    def __call__(self, args: argparse.Namespace, settings: Settings) -> int:
        schema = self.request_model()
        arguments: dict[str, Any] = {
            k: v for k, v in vars(args).items() if k not in _GLOBAL_ARGS and v is not None
        }
        try:
            payload = schema(**arguments)
        except ValidationError as exc:
            details = "; ".join(
                f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
            )
            raise UsageError(f"invalid arguments for {self.name}: {details}") from exc
        return self.run(payload, settings)

    @abc.abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None: ...

    @abc.abstractmethod
    def request_model(self) -> type[BaseModel]: ...

    @abc.abstractmethod
    def run(self, payload: Any, settings: Settings) -> int: ...


def add_model_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, choices=["tree", "lattice", "lamplighter"])
    parser.add_argument("--b", type=int, help="tree branching (vertex degree b+1)")
    parser.add_argument("--dim", type=int, help="lattice / lamplighter dimension")
    parser.add_argument("--jumps", help="comma-separated positive jump sizes, e.g. 1,2")
