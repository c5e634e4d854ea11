from __future__ import annotations


class FssError(Exception):
    """Base class for all errors raised by this package."""


class DataError(FssError):
    """An input file violates its schema or a referential invariant."""

    def __init__(self, message: str, file: str | None = None, row: int | None = None):
        self.file = file
        self.row = row
        self.problems: list[DataError] = [self]
        where = ""
        if file is not None:
            where = file if row is None else f"{file}:{row}"
            where += ": "
        super().__init__(where + message)


class MissingFile(DataError):
    pass


class SchemaError(DataError):
    pass


class DanglingReference(DataError):
    def __init__(self, entity: str, key: str, file: str | None = None, row: int | None = None):
        self.entity = entity
        self.key = key
        super().__init__(f"unknown {entity} {key!r}", file, row)


class DuplicateKey(DataError):
    def __init__(self, entity: str, key: str, file: str | None = None, row: int | None = None):
        self.entity = entity
        self.key = key
        super().__init__(f"duplicate {entity} {key!r}", file, row)


class ConfigError(FssError):
    pass


class MissingBaseline(FssError):
    pass


class EmptyByline(FssError, ValueError):
    pass


class UndefinedBaseline(FssError):
    pass


class UnknownTerritory(FssError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class UnknownField(FssError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class IneligibleField(FssError):
    pass


class RankOutOfRange(FssError, ValueError):
    pass


class LengthMismatch(FssError, ValueError):
    pass


class DegenerateInput(FssError, ValueError):
    pass
