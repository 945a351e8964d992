"""Small printing helper shared by the demo scripts."""
import numpy as np


def ket(state, tol=1e-12):
    """Render a state as a sum of labeled basis kets, dropping tiny terms."""
    n = len(state.labels)
    terms = []
    for idx in np.flatnonzero(np.abs(state.amps) > tol):
        a = state.amps[idx]
        a = complex(round(a.real, 4) + 0.0, round(a.imag, 4) + 0.0)
        coef = f"{a.real:+.4f}" if a.imag == 0 else f"({a.real:+.4f}{a.imag:+.4f}j)"
        terms.append(f"{coef}|{format(int(idx), f'0{n}b')}>")
    return " ".join(terms) + f"   [{','.join(state.labels)}]"
