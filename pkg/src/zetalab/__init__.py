"""Desk-scale laboratory for the value distribution of |zeta(1+it)| and |L(1,chi)|.

The package is organized around a handful of building blocks:

* :mod:`zetalab.numkit` -- primes, Bessel I0, divisor coefficients d_z,
  Mertens products and the growth constant C.
* :mod:`zetalab.zetaeval` -- reference evaluation of zeta(1+it) and its
  short Euler products.
* :mod:`zetalab.randmodel` -- the random Euler product model with
  independent unit-circle multipliers per prime.
* :mod:`zetalab.moments` -- local factors and moments of short products.
* :mod:`zetalab.distribution` -- predicted and empirical tail functions.
* :mod:`zetalab.hunter` -- constructive search for large |zeta(1+it)|.
* :mod:`zetalab.characters` -- the Dirichlet character analogue mod a prime.
* :mod:`zetalab.cli` -- command line front end with reproducible output.
"""

__version__ = "0.1.0"
