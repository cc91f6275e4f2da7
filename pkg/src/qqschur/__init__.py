"""Exact computations in Hecke-Clifford and queer q-Schur superalgebras over Q(v)."""
from .combin import SuperMatrix, smat
from .hecke import HCElement
from .longform import LongElement, gen_mul
from .ring import ONE, Q, V, ZERO, RatFunc
from .schur import SchurElement, phi_mul_bruteforce, phi_mul_closed
from .sdp import HypothesisError

__version__ = "0.1.0"
