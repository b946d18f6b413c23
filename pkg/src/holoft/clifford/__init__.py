from .pauli import PauliString
from .tableau import MeasureOutcome, Tableau, canonical_form, new_state, states_equal
from .propagate import conjugate_pauli
from .frames import PauliFrames

__all__ = ["PauliString", "Tableau", "MeasureOutcome", "new_state", "canonical_form",
           "states_equal", "conjugate_pauli", "PauliFrames"]
