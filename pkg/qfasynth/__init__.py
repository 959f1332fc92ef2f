"""
qfasynth - circuit synthesis and verification for MOD_p quantum finite automata

Modules:
    model       circuit-free automaton semantics, error bound, K search
    uniform     naive, Mottonen, pair and hybrid synthesis of U_a
    pseudo      pseudo-rotation circuits and their realized K sets
    lnn         pseudo circuits routed on a line of qubits
    rewrite     rewrite into the {CNOT, I, RZ, SX, X} basis
    simulator   exact and noisy statevector simulation
    cli         the qfa_synth command line
"""

__version__ = "0.1.0"
