#!/usr/bin/env python3

import sys

if sys.version_info < (3, 11):
    raise EnvironmentError("Please use Python version 3.11 or higher!")

__date__ = "Oct 19, 2026"
__version__ = "0.3.0"
