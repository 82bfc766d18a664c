"""
Exception hierarchy shared by the parsers, the dependency queries, the simulator and the CLI.

Every error carries an exit code for the command line: 1 for domain errors (unknown ids,
invalid scenarios), 2 for usage and parse errors (malformed files, bad flags).
"""
from enum import Enum
from typing import Optional


class CrossdepError(Exception):
    exit_code = 1

    def __init__(self, message: str, file: Optional[str] = None, line: Optional[int] = None,
                 column: Optional[int] = None) -> None:
        super().__init__(message)
        self.message = message
        self.file = file
        self.line = line
        self.column = column

    @property
    def code(self) -> str:
        return type(self).__name__

    def located(self, file: Optional[str] = None, line: Optional[int] = None,
                column: Optional[int] = None) -> "CrossdepError":
        # Fill in only the location fields that are still unknown.
        if self.file is None:
            self.file = file
        if self.line is None:
            self.line = line
        if self.column is None:
            self.column = column
        return self

    def describe(self) -> str:
        """
        One report line: `<file>:<line>:<col> <code> <message>`.
        """
        return "{0}:{1}:{2} {3} {4}".format(
            self.file if self.file is not None else "-",
            self.line if self.line is not None else 0,
            self.column if self.column is not None else 0,
            self.code,
            self.message
        )


class ParseErrorCode(Enum):
    BadIndent = "BadIndent"
    UnknownKeyword = "UnknownKeyword"
    UnterminatedString = "UnterminatedString"
    IllegalKind = "IllegalKind"
    DuplicateSibling = "DuplicateSibling"
    BadQualifiedId = "BadQualifiedId"
    UnexpectedToken = "UnexpectedToken"
    EmptyLabel = "EmptyLabel"
    UnknownPredicate = "UnknownPredicate"
    UnknownMode = "UnknownMode"
    BadHorizon = "BadHorizon"


class ParseError(CrossdepError):
    exit_code = 2

    def __init__(self, code: ParseErrorCode, message: str, file: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None) -> None:
        super().__init__(message, file, line, column)
        self.parse_code = code

    @property
    def code(self) -> str:
        return self.parse_code.value


# Ontology model.
class EmptyLabel(CrossdepError):
    pass


class DuplicateSibling(CrossdepError):
    pass


class IllegalKind(CrossdepError):
    pass


class FrozenOntology(CrossdepError):
    pass


class UnknownParent(CrossdepError):
    pass


class UnknownConcept(CrossdepError):
    pass


class BadQualifiedId(CrossdepError):
    exit_code = 2


# Cross-links and requirements.
class DuplicateLink(CrossdepError):
    pass


class IntraOntologyLink(CrossdepError):
    pass


class UnknownRequirement(CrossdepError):
    pass


class UnknownStakeholder(CrossdepError):
    pass


# Rules and simulation.
class DuplicateRuleId(CrossdepError):
    pass


class BadSlot(CrossdepError):
    pass


class ScenarioInvalid(CrossdepError):
    pass


class InvalidArgument(CrossdepError):
    exit_code = 2


# Input handling.
class MalformedInput(CrossdepError):
    exit_code = 2


class UnreadableFile(CrossdepError):
    exit_code = 2
