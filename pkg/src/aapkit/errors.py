"""Error taxonomy shared by all solver layers.

The CLI maps these onto its exit-status contract: InputError -> 2,
CapacityError -> 3.  LogicError marks preconditions between operations
(e.g. asking for a plan between non-equivalent states) and internal
invariant violations that must never be silent.
"""


class InputError(ValueError):
    """Malformed or out-of-contract input; the message names the offender."""


class CapacityError(RuntimeError):
    """A configured enumeration cap would be exceeded; never truncate silently."""


class LogicError(RuntimeError):
    """Caller violated an inter-operation precondition, or an invariant broke."""
