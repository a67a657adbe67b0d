#!/usr/bin/env python3
"""
.. module cli
   :platform: Unix, Windows, Mac, Linux
   :synopsis: Entry point of the ``mgopt`` command. Exit status is 0 on success, 1 for an invalid
    configuration and 2 when a run fails.
"""

import logging
import sys

from mgopt.exceptions import ConfigurationError, MicrogridError

from .comparer import MicrogridComparer
from .evaluator import MicrogridEvaluator
from .optimizer import MicrogridOptimizer
from .parser import MicrogridArgumentParser
from .simulator import MicrogridSimulator

logger = logging.getLogger("mgopt")


def main(argv=None) -> int:
    parser = MicrogridArgumentParser()

    parser.register_handler("simulate", MicrogridSimulator(), "sim")
    parser.register_handler("evaluate", MicrogridEvaluator(), "eval")
    parser.register_handler("optimize", MicrogridOptimizer(), "opt")
    parser.register_handler("compare", MicrogridComparer())

    namespace = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if namespace.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        return parser.invoke_handler(namespace)
    except ConfigurationError as error:
        logger.error("Invalid configuration:\n%s", error)
        return 1
    except (MicrogridError, RuntimeError, OSError) as error:
        logger.error("%s: %s", type(error).__name__, error)
        return 2
    except Exception:
        logger.exception("Run failed with an unexpected error")
        return 2



if __name__ == "__main__":
    sys.exit(main())
