from __future__ import annotations


class Jorn5Error(Exception):
    """Base class for every error raised by the workbench."""


class InputError(Jorn5Error):
    """Malformed or illegal input: maps to exit status 2."""


class VerificationError(Jorn5Error):
    """A computed fact disagrees with the expected one: maps to exit status 1."""


class ScalarSyntaxError(InputError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class UnboundParameterError(InputError):
    def __init__(self, name: str):
        super().__init__(f"Unbound parameter: {name}")
        self.name = name


class PoleError(Jorn5Error):
    def __init__(self, point):
        super().__init__(f"Rational function has a pole at t = {point}")
        self.point = point
