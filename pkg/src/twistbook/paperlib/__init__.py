"""Named surface families and derivation scripts as executable data."""
from .families import (FAMILIES, NamedFamily, UnknownFamily, UnsupportedParameter,
                       ValidationFailed, build, lift)
from .scripts import PROOF_NAMES, RelationCheck, ScriptCheck, identity_block, proof_script

__all__ = ["FAMILIES", "NamedFamily", "UnknownFamily", "UnsupportedParameter",
           "ValidationFailed", "build", "lift", "PROOF_NAMES", "RelationCheck",
           "ScriptCheck", "identity_block", "proof_script"]
