"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed input file. Carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidConfig(ValueError):
    pass


class NotAcyclic(ValueError):
    """The scoped sub-tournament contains a directed triangle."""

    def __init__(self, witness):
        super().__init__(f"directed triangle {tuple(witness)} inside scope")
        self.witness = tuple(witness)


class NotNicePair(ValueError):
    """A forbidden pattern with two pool vertices exists; carries the witness."""

    def __init__(self, witness):
        super().__init__(f"pattern {tuple(witness)} has two pool vertices")
        self.witness = tuple(witness)


class NotClawFree(ValueError):
    def __init__(self, witness):
        super().__init__(f"claw witness {witness}")
        self.witness = witness


class NotProper(ValueError):
    """Interval set handed to the block partition contains nested intervals."""


class UndefinedMeet(ValueError):
    """Meet requested for intervals that do not cross."""


class TooLarge(ValueError):
    """Instance exceeds the exact solver's vertex limit."""


class OracleContractViolation(RuntimeError):
    """The rainbow oracle returned an outcome that fails verification."""


class PreconditionViolated(ValueError):
    """An add operation was invoked outside its hypothesis; signals a rule bug."""


class Case2SelectionFailed(RuntimeError):
    """No block interval satisfied the merge budget; signals an invariant bug."""


class RepackFailed(RuntimeError):
    """The repacking matching could not be saturated; signals an invariant bug."""


class InvalidSolution(ValueError):
    """A solution handed in for lifting or verification does not solve the instance."""
