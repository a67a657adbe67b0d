#!/usr/bin/env python3
"""
.. module cli.handler
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Base classes of the sub-command handlers. ``RunCommandHandler`` owns everything the four
    run commands share: the common flags, seed precedence, configuration loading and the run log.
"""

import abc
import argparse
import dataclasses
import logging
import os
import pathlib
import time
from typing import Optional

from mgopt.basic_io.out import make_ending_string, make_starting_string, save_to_output
from mgopt.dispatch import DesignVector
from mgopt.exceptions import ConfigurationError
from mgopt.settings import RunConfig, bundled_case, build_run_config, from_yaml

# ===================== What can be exported? =====================
__all__ = ["MicrogridCommandHandler", "RunCommandHandler", "resolve_seed", "positive_int"]

logger = logging.getLogger(__name__)

SEED_VARIABLE = "MICROGRID_SEED"


class MicrogridCommandHandler(abc.ABC):
    @abc.abstractmethod
    def init_parser(self, parser: argparse.ArgumentParser): ...

    @abc.abstractmethod
    def run(self, namespace) -> int: ...


def _seed(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be an integer, got {0!r}".format(text))
    if seed < 0:
        raise argparse.ArgumentTypeError("seed must be >= 0, got {0}".format(seed))
    return seed


def positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got {0!r}".format(text))
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1, got {0}".format(n))
    return n


def resolve_seed(cli_seed: Optional[int], config_seed: int) -> int:
    """``--seed`` first, then the ``MICROGRID_SEED`` environment variable, then the configuration."""
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get(SEED_VARIABLE, "").strip()
    if env:
        try:
            return _seed(env)
        except argparse.ArgumentTypeError as error:
            raise ConfigurationError(["{0}: {1}".format(SEED_VARIABLE, error)])
    return config_seed


class RunCommandHandler(MicrogridCommandHandler):
    """
    A command that loads a configuration, writes into an output directory and logs a banner pair to its
    ``output.txt``. Subclasses implement ``execute``.
    """

    #: Accept ``--design``.
    takes_design = False
    #: Accept ``--replicates``.
    takes_replicates = False

    def init_parser(self, parser: argparse.ArgumentParser):
        parser.add_argument(
            "--config",
            type=str,
            default=None,
            help="YAML run configuration; the bundled synthetic case when omitted.",
        )
        parser.add_argument(
            "--seed",
            type=_seed,
            default=None,
            help="Master seed, overriding {0} and the configuration.".format(SEED_VARIABLE),
        )
        parser.add_argument(
            "--scenarios",
            type=positive_int,
            default=None,
            help="Monte Carlo scenarios per evaluation.",
        )
        parser.add_argument(
            "--jobs",
            type=positive_int,
            default=os.cpu_count() or 1,
            help="Worker processes for scenario batches and replicates.",
        )
        parser.add_argument("--out", type=str, default=None, help="Output directory.")
        parser.add_argument(
            "--no-incentives",
            action="store_true",
            help="Clamp the t_rp and t_er bounds to zero.",
        )
        if self.takes_design:
            parser.add_argument(
                "--design",
                type=float,
                nargs=len(DesignVector.FIELDS),
                metavar=tuple(f.upper() for f in DesignVector.FIELDS),
                default=None,
                help="Design to use instead of the configured initial design.",
            )
        if self.takes_replicates:
            parser.add_argument(
                "--replicates",
                type=positive_int,
                default=None,
                help="Independent optimizer runs per optimizer.",
            )

    def load(self, namespace) -> RunConfig:
        settings = bundled_case() if namespace.config is None else from_yaml(namespace.config)
        run_config = build_run_config(settings)
        run_config = run_config.with_seed(resolve_seed(namespace.seed, run_config.seed))
        if namespace.no_incentives:
            run_config = run_config.without_incentives()
        if namespace.out is not None:
            run_config = dataclasses.replace(
                run_config, output_directory=pathlib.Path(namespace.out)
            )
        return run_config

    def design(self, namespace, run_config: RunConfig) -> DesignVector:
        """
        The ``--design`` vector, else the configured initial design. A vector outside the configured bounds is
        reported as a configuration problem.
        """
        if namespace.design is None:
            design = run_config.initial
        else:
            design = DesignVector.from_array(namespace.design)
        if namespace.no_incentives:
            design = design.without_incentives()
        problems = [
            "--design {0}: {1} is outside [{2}, {3}]".format(name, value, lo, hi)
            for name, value, (lo, hi) in zip(DesignVector.FIELDS, design.to_array(), run_config.bounds)
            if not lo <= value <= hi
        ]
        if problems:
            raise ConfigurationError(problems)
        return design

    def run(self, namespace) -> int:
        start_time = time.time()
        run_config = self.load(namespace)
        if self.takes_design:
            # before the output directory is touched
            self.design(namespace, run_config)
        out = pathlib.Path(run_config.output_directory)
        out.mkdir(parents=True, exist_ok=True)
        log_file = out / "output.txt"
        try:
            log_file.unlink()
        except FileNotFoundError:
            pass
        save_to_output(log_file, make_starting_string(namespace.command))
        logger.info("Writing results to %s (seed %d)", out, run_config.seed)

        self.execute(namespace, run_config, out)

        save_to_output(log_file, make_ending_string(time.time() - start_time))
        return 0

    @abc.abstractmethod
    def execute(self, namespace, run_config: RunConfig, out: pathlib.Path): ...
