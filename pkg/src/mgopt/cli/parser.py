#!/usr/bin/env python3
"""
.. module cli.parser
   :platform: Unix, Windows, Mac, Linux
   :synopsis: The ``mgopt`` argument parser: global flags and one sub-parser per registered handler.
"""

import argparse

from mgopt import __version__
from mgopt.cli.handler import MicrogridCommandHandler

# ===================== What can be exported? =====================
__all__ = ["SubCommandResolvers", "MicrogridArgumentParser"]


class SubCommandResolvers:
    """
    Pairs a sub-command's handler with the parser of its arguments.

    :param handler: The handler that does the sub-command's work.
    :param parser: The parser of the sub-command's arguments.
    """

    def __init__(self, handler, parser):
        self.handler = handler
        self.parser = parser


class MicrogridArgumentParser:
    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog="mgopt",
            description="Simulation-based capacity and incentive planning for hybrid microgrids.",
        )
        self.init_parser()
        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        self.handlers = dict()

    def init_parser(self):
        """
        Arguments shared by every sub-command:

        1. ``-V``, ``--version``: the installed release of ``mgopt``.
        2. ``-v``, ``--verbose``: log at ``DEBUG`` level.
        """
        self.parser.add_argument(
            "-V",
            "--version",
            action="version",
            version="current mgopt version: {0}".format(__version__),
        )
        self.parser.add_argument(
            "-v", "--verbose", action="store_true", help="Log debugging information."
        )

    def register_handler(self, command: str, handler: MicrogridCommandHandler, *aliases):
        """
        Add a sub-command. The built-in ones are ``simulate``, ``evaluate``, ``optimize`` and ``compare``.

        :param command: The sub-command's name.
        :param handler: The handler paired with the sub-command.
        :param aliases: Alternative names of the sub-command.
        """
        if not isinstance(command, str):
            raise TypeError("Argument *command* should be a string!")

        if not isinstance(handler, MicrogridCommandHandler):
            raise TypeError("Argument *handler* should be a ``MicrogridCommandHandler`` instance!")

        new_parser = self.subparsers.add_parser(command, aliases=list(aliases))
        self.handlers.update(
            dict.fromkeys(
                (command, *aliases),
                SubCommandResolvers(handler=handler, parser=new_parser),
            )
        )
        handler.init_parser(new_parser)

    def parse_args(self, args=None, namespace=None):
        return self.parser.parse_args(args, namespace)

    def invoke_handler(self, namespace) -> int:
        """
        Run the handler of ``namespace.command``.

        :return: The handler's exit status.
        """
        try:
            command: str = getattr(namespace, "command")
        except AttributeError:
            raise AttributeError("Argument *namespace* does not have an ``command`` attribute!")

        try:
            handler: MicrogridCommandHandler = self.handlers[command].handler
        except KeyError:
            raise ValueError("Command '{0}' is not recognized!".format(command))
        return handler.run(namespace)
