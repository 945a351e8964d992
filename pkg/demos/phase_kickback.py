"""Phase kickback on the cycle 1 -> 8 -> 4 -> 2 of multiplication by 8 mod 15.

Each Fourier cycle state is an eigenvector of the multiply-by-8 map. A
controlled application writes its eigenvalue onto the ancilla, and the
measured Fourier transform then reads the index back out with certainty.
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import numpy as np

from _show import ket
from qnet import network as net
from qnet.gates import apply
from qnet.measure import make_rng
from qnet.shor import (
    fourier_ancilla_state,
    fourier_cycle_state,
    kickback_network,
    measured_qft_network,
    mod_mul_operator,
    system_labels,
)

op = mod_mul_operator(8, 15)
rng = make_rng(0)

print("eigenvectors of x -> 8x mod 15")
for m in range(4):
    psi = fourier_cycle_state(8, 15, m)
    out = apply(psi, op.gate(), system_labels(4))
    lam = np.vdot(psi.amps, out.amps)
    print(f"  psi_{m} = {ket(psi)}")
    print(f"          eigenvalue {lam.real:+.3f}{lam.imag:+.3f}j")

print("\ntwo ancillas, controlled f and f^2, then the measured transform")
for m in range(4):
    psi = fourier_cycle_state(8, 15, m)
    kicked = net.execute(kickback_network(op, 2), rng, initial=psi).final
    # the system register is left untouched, so the ancillas factor out
    bits = net.execute(measured_qft_network(2), rng, initial=kicked).classical_bits
    a = bits["a0"] + 2 * bits["a1"]
    print(f"  psi_{m}: ancillas carry {ket(fourier_ancilla_state(m, 2))}  -> read a = {a}")
