"""fibervortex: evanescent gauge fields around an optical nanofiber and
the vortex structures they imprint on a toroidally trapped condensate.

Modules
-------
fiber        guided HE modes and evanescent field evaluation
gauge        artificial vector potential A_z and synthetic B field
gpe          split-step Gross-Pitaevskii solver (imaginary / real time)
diagnostics  Sobel maps, phase-winding vortex detection, ring tracing
scissors     tilt protocol and two-mode frequency analysis
config       strict flat key-value run configuration
fileio       EVF1/GAU1/PSI1 binary grids and CSV emission
cli          command-line pipeline
"""

__version__ = "0.1.0"
