"""Exception hierarchy.

Physics failures (no root, no minimum, on resonance) derive from
:class:`PhysicsError`; bad inputs derive from :class:`ConfigError`.
The CLI maps the former to exit status 1 and the latter to 2.
"""


class NanotrapError(Exception):
    pass


class PhysicsError(NanotrapError):
    pass


class ConfigError(NanotrapError, ValueError):
    pass


class NoGuidedRoot(PhysicsError):
    pass


class NonConvergence(PhysicsError):
    pass


class InsideFiber(PhysicsError, ValueError):
    pass


class MixedWavelengthGroup(ConfigError):
    pass


class ParseError(ConfigError):
    pass


class SchemaError(ConfigError):
    pass


class SelectionRuleError(ConfigError):
    pass


class OnResonance(PhysicsError):
    pass


class NoSignChange(PhysicsError):
    pass


class ZeroField(PhysicsError, ValueError):
    pass


class DimensionMismatch(NanotrapError, ValueError):
    pass


class NonPositiveDistance(PhysicsError, ValueError):
    pass


class NonPositiveFrequency(PhysicsError, ValueError):
    pass


class NoMinimum(PhysicsError):
    pass


class PoorFit(PhysicsError):
    pass
