#!/usr/bin/env python3

from .read_input import *
