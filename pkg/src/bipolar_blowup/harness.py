import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import pydantic

from . import mixins, task_routings
from .errors import BlowupError, ConfigError
from .logger import close_handler, init_root_logger
from .objs.config_objs import RunConfig
from .objs.task_objs import TableOutput

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


class Base(
    mixins.SolveTasksMixin,
    mixins.ProfileTasksMixin,
    mixins.SweepTasksMixin,
    mixins.TableWriterMixin,
):
    pass


def _set_dotted(data: Dict[str, Any], dotted: str, value: Any) -> None:
    *parents, leaf = dotted.split(".")
    node = data
    for key in parents:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError("expected a section", ".".join(parents))
    node[leaf] = value


def load_config(path: Optional[Path], overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Parse a JSON run configuration; ``overrides`` maps dotted field paths to values
    that replace the file's. Validation errors come back as ConfigError with the field path.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as err:
            raise ConfigError(f"not valid JSON: {err}") from err
        if not isinstance(data, dict):
            raise ConfigError("the configuration must be a JSON object")
    for dotted, value in (overrides or {}).items():
        if value is not None:
            _set_dotted(data, dotted, value)
    try:
        config = RunConfig.parse_obj(data)
    except pydantic.ValidationError as err:
        first = err.errors()[0]
        field_path = ".".join(str(part) for part in first["loc"] if part != "__root__")
        raise ConfigError(first["msg"], field_path or None) from err
    logger.debug(f"{config=}")
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bipolar-blowup", description="Gradient blow-up near a nearly touching inclusion")
    parser.add_argument("task", choices=sorted(task_routings.TASK_ROUTING_MAP), help="task to run")
    parser.add_argument("--config", dest="config", type=Path, help="JSON run configuration")
    parser.add_argument("--out", dest="out", type=Path, help="output CSV; standard output if omitted")
    parser.add_argument("--threads", dest="threads", type=int, help="worker threads for sweeps and grids")
    parser.add_argument("--tol", dest="tol", type=float, help="spectral truncation tolerance")
    parser.add_argument("--log-file", dest="log_file", type=Path, help="rotating log file")
    parser.add_argument("--log-level", dest="log_level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="log level")
    return parser


class Harness(Base):
    def __init__(
            self,
            *,
            log_file: Optional[Path] = None,
            log_level: int = logging.INFO,
            log_max_bytes: int = 3 * 1024 * 1024,  # 3 MB
            log_backup_count: int = 2,
    ):
        self.log_file: Optional[Path] = None
        self.log_handler: Optional[logging.Handler] = None
        self.log_max_bytes = log_max_bytes
        self.log_backup_count = log_backup_count
        if log_file is not None:
            self._init_logging(Path(log_file), log_level)
        self.out: Optional[Path] = None

    def _init_logging(self, log_file: Path, log_level: int) -> None:
        self.log_file = log_file
        self.log_handler = init_root_logger(
            log_file=log_file,
            log_level=log_level,
            log_max_bytes=self.log_max_bytes,
            log_backup_count=self.log_backup_count,
        )

    def run_task(self, config: RunConfig) -> TableOutput:
        routing = task_routings.TASK_ROUTING_MAP.get(config.task)
        if routing is None:
            raise ConfigError(f"unknown task {config.task!r}", "task")
        logger.debug(f"{routing=}")
        handler = getattr(self, routing.handler_name)
        return handler(config=config)

    def run(self, argv: Optional[List[str]] = None) -> int:
        parser = build_parser()
        args = parser.parse_args(argv)
        logger.debug(f"{args=}")
        if args.log_file is not None and self.log_file is None:
            self._init_logging(args.log_file, logging.getLevelName(args.log_level))
        if args.config is not None and not args.config.is_file():
            parser.error(f"config file {args.config} does not exist")

        try:
            config = load_config(args.config, {
                "task": args.task,
                "out": str(args.out) if args.out is not None else None,
                "threads": args.threads,
                "tolerances.spectral": args.tol,
            })
        except ConfigError as err:
            logger.error(f"config error: {err}")
            parser.exit(EXIT_CONFIG, f"config error: {err}\n")

        self.out = config.out
        try:
            table = self.run_task(config)
        except ConfigError as err:
            logger.error(f"config error: {err}")
            parser.exit(EXIT_CONFIG, f"config error: {err}\n")
        except BlowupError as err:
            logger.error(f"{config.task} failed: {err}", exc_info=True)
            parser.exit(EXIT_FAILED, f"{config.task} failed: {err}\n")
        self.write_table(table)
        if not table.passed:
            logger.warning(f"{config.task}: checks failed")
            return EXIT_FAILED
        return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    harness = Harness()
    try:
        return harness.run(argv)
    finally:
        close_handler(harness.log_handler)
