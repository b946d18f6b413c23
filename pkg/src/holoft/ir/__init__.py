from .model import (Annotation, BoundaryOp, Circuit, Column, ColumnGate, ColumnReset, GateKind,
                    GlobalHLayer, LatticeDims, Layout2D, PhysGate, PhysicalCircuit, Site,
                    TwoColumnGate, VerticalCZLayer)
from .validate import ValidationReport, Violation, validate
from .expand import expand
from .builders import (ReadoutPlan, build_mirror_sequence, build_readout_sequence, build_T_pulse,
                       build_T_tilde, readout_plan)

__all__ = [n for n in dir() if not n.startswith("_")]
