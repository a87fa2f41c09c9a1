"""Exception hierarchy shared by all modules."""


class FuzzyError(Exception):
    """Base class for every error raised by this package."""


class LatticeError(FuzzyError, ValueError):
    pass


class NotDistributive(LatticeError):
    def __init__(self, witness):
        super().__init__(f"lattice is not distributive, witness triple {witness}")
        self.witness = witness


class QuantaleLawViolation(LatticeError):
    def __init__(self, law, witness):
        super().__init__(f"quantale law '{law}' violated at {witness}")
        self.law = law
        self.witness = witness


class UnitNotTop(QuantaleLawViolation):
    def __init__(self, unit, top):
        super().__init__("unit-is-top", (unit, top))
        self.args = (f"unit {unit!r} is not the top element {top!r}",)


class DomainError(FuzzyError, ValueError):
    pass


class UnknownElement(FuzzyError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown element"


class NoBottom(DomainError):
    def __init__(self, what="domain"):
        super().__init__(f"{what} has no least element")


class SizeCapExceeded(FuzzyError, ValueError):
    pass


# The oracle and enumeration guards use the name below.
CapExceeded = SizeCapExceeded


class PredicateError(FuzzyError, ValueError):
    pass


class NotAntitone(PredicateError):
    def __init__(self, pair, values=None):
        msg = f"not antitone: {pair[0]!r} <= {pair[1]!r}"
        if values is not None:
            msg += f" but value {values[1]!r} is not below {values[0]!r}"
        super().__init__(msg)
        self.pair = pair


class NotNormalized(PredicateError):
    pass


class Mismatch(PredicateError):
    pass


class HypothesisNotMet(FuzzyError):
    pass
