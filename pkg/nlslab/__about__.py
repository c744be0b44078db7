"""
=================================
``nlslab`` -- Soliton Trains Lab
=================================

nlslab builds stationary profiles, soliton trains and kink-soliton trains
of the nonlinear Schrödinger equation ``i u_t + Δu + f(u) = 0``,
evolves them with a split-step spectral solver and checks the
closeness estimates, conservation laws and admissibility conditions
that govern such trains.

.. code:: python3

   >>> from nlslab import Power, Grid, ground_state_power_1d
   >>> profile = ground_state_power_1d(alpha=2, omega=1, grid=Grid.regular(128, 8192))
   >>> round(profile(0.0), 12)
   1.414213562373

Check out `the nlslab documentation <https://nlslab.readthedocs.io/en/latest/>`_
for more information.
"""
__title__ = 'nlslab'
__summary__ = 'Soliton and kink-soliton trains of nonlinear Schrödinger equations'
__url__ = 'https://github.com/MaineKuehn/nlslab'

__version__ = '0.1.0'
__author__ = 'Eileen Kuehn, Max Fischer'
__email__ = 'mainekuehn@gmail.com'
__copyright__ = '2020 %s' % __author__
__keywords__ = 'nonlinear schroedinger soliton kink split-step spectral duhamel'
