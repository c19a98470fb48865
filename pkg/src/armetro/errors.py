"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map a
failing pipeline stage to a distinct process status.
"""


class ArmetroError(Exception):
    exit_code = 1


# transactions
class EmptyDataset(ArmetroError):
    exit_code = 10


class MalformedLine(ArmetroError):
    exit_code = 11

    def __init__(self, line_number, reason):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


class EmptyToken(ArmetroError):
    exit_code = 12


class EmptyItemset(ArmetroError):
    exit_code = 13


class OverlappingSides(ArmetroError):
    exit_code = 14


class AntecedentUnsupported(ArmetroError):
    exit_code = 15


class ZeroMarginal(ArmetroError):
    exit_code = 16


# apriori / rule files
class InvalidThresholds(ArmetroError):
    exit_code = 20


class MalformedRule(ArmetroError):
    exit_code = 21


class NoRulesMined(ArmetroError):
    exit_code = 22


# rules
class NoConsequentCandidate(ArmetroError):
    exit_code = 30


class EmptyAfterFilter(ArmetroError):
    exit_code = 31


# graph
class SelfLoop(ArmetroError):
    exit_code = 35


class NoSource(ArmetroError):
    exit_code = 36


class NoSink(ArmetroError):
    exit_code = 37


class UnknownNode(ArmetroError, KeyError):
    exit_code = 38


# metromap / ea
class TooFewLines(ArmetroError):
    exit_code = 40


class Infeasible(ArmetroError):
    exit_code = 41


class InsufficientSources(ArmetroError):
    exit_code = 42


class NoPathWithinTau(ArmetroError):
    exit_code = 43


class InvalidConfig(ArmetroError):
    exit_code = 44


# render
class TooManyLines(ArmetroError):
    exit_code = 50
