from .codes import (CodeSpec, bs_index, code_bs9, code_qr3, correction_table, encoded_state,
                    gf2_rank, ideal_encoder, syndrome)
from .gadgets import (FeedForward, GadgetCircuit, bs_ec, encode_arbitrary, ft_swap_routine,
                      lift_gates, m_gate, prepare_logical, prepare_qr, toffoli_decomposition,
                      vn_routine, vote_syndromes, zhalf_circuit, zquarter_circuit)
from .decode import FAIL, ideal_decode, logical_frame
from .execute import run_dense, run_tableau, supply_state

__all__ = ["CodeSpec", "bs_index", "code_bs9", "code_qr3", "correction_table", "encoded_state",
           "gf2_rank", "ideal_encoder", "syndrome", "FeedForward", "GadgetCircuit", "bs_ec",
           "encode_arbitrary", "ft_swap_routine", "lift_gates", "m_gate", "prepare_logical",
           "prepare_qr", "toffoli_decomposition", "vn_routine", "vote_syndromes", "zhalf_circuit",
           "zquarter_circuit", "FAIL", "ideal_decode", "logical_frame", "run_dense", "run_tableau",
           "supply_state"]
