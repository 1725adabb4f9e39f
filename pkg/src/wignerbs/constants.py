"""Convention constants shared by every module.

Phase space is parametrized by ``alpha = x + i p`` while ``a = (x + i p)/sqrt(2)``
(hbar = 1). With this asymmetry the Weyl transform reads

    A(alpha) = (1/pi) Tr[A Pi(alpha / sqrt 2)],   A = 2 Int A(alpha) Pi(alpha / sqrt 2) d^2 alpha

and ``D(beta)`` shifts ``x`` by ``sqrt(2) Re beta``. The overlap (Moyal) formula is
``Tr[A B] = 2 pi Int A B d^2 alpha``.
"""

import math

#: alpha -> displaced-parity argument: Pi(alpha * WEYL_ARG_SCALE)
WEYL_ARG_SCALE = 1.0 / math.sqrt(2.0)
#: prefactor of the forward Weyl transform
WEYL_PREFACTOR = 1.0 / math.pi
#: prefactor of the inverse Weyl transform
INVERSE_WEYL_PREFACTOR = 2.0
#: Tr[AB] = MOYAL_CONSTANT * Int A B
MOYAL_CONSTANT = 2.0 * math.pi
#: Int |F[W]|^2 = PARSEVAL_CONSTANT * Int |W|^2 for the phase-space Fourier transform
PARSEVAL_CONSTANT = 0.25
#: multiplicative constant of the interference formula W_ab * W_cd = c L_2[W_cb W_ad]
INTERFERENCE_CONSTANT = 2.0 * math.pi

#: vacuum Wigner entropy ln(pi) + 1
VACUUM_ENTROPY = math.log(math.pi) + 1.0

DEFAULT_NCUT = 40
DEFAULT_NCUT_TWO_MODE = 24
DEFAULT_GRID_POINTS = 256
