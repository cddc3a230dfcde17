"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when inputs violate the documented preconditions."""


class DataError(InvalidInputError):
    """Raised while ingesting a file; carries the offending location."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
