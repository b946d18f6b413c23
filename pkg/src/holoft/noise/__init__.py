from .model import (InhomogeneityModel, Location, NoiseModel, NoisyPlan, PlanStep, error_locations,
                    execute_plan, inject)
from .fit import (CSV_HEADER, FitResult, McEstimate, crossing, fit_arrays, fit_suppression,
                  pseudo_threshold, pseudo_threshold_ci)
from .framesim import FrameSimulator, Reference, reference_run
from .mc import (build_stack, run_column_containment, run_inhomogeneity, run_memory_exrec,
                 run_t_fault_paths, single_fault_scan)

__all__ = ["InhomogeneityModel", "Location", "NoiseModel", "NoisyPlan", "PlanStep",
           "error_locations", "execute_plan", "inject", "CSV_HEADER", "FitResult", "McEstimate",
           "crossing", "fit_arrays", "fit_suppression", "pseudo_threshold", "pseudo_threshold_ci",
           "FrameSimulator", "Reference", "reference_run", "build_stack", "run_column_containment",
           "run_inhomogeneity", "run_memory_exrec", "run_t_fault_paths", "single_fault_scan"]
