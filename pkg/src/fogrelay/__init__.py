"""Outage modeling and optimization for two-hop amplify-and-forward fog links.

Subpackages/modules:

* ``units``       dBm/dB <-> linear conversions
* ``bessel``      modified Bessel K1 (series + Chebyshev)
* ``model``       link geometry, SNR, and the three outage evaluators
* ``descent``     steepest descent, projections, second-derivative test
* ``schemes``     the four location/power design schemes
* ``gridsearch``  brute-force reference search
* ``selection``   convergence-counter relay selection protocol
* ``config``      flat config files and defaults
* ``experiments`` seeded dataset builders
* ``service``     FastAPI wrapper
* ``cli``         thin command-line client
"""

__version__ = "0.1.0"
