"""Combinatorial cubical topology over F2.

Grids, cubes, chains and cochains with boundary/coboundary, cup products,
Lebesgue and Hurewicz tilings with path following, cubical Sperner lemmas
(Kuhn, Ky Fan), Freudenthal triangulations, and solid/discrete cube duality.
"""

__version__ = "0.1.0"
