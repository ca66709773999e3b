"""Symbolic verifier for Z2-graded quantum algebras given by generators,
oriented rewrite rules, and structure maps.

Subpackages:
    scalar        exact coefficient field Q(i)(s, h, hb, c)
    algebra       graded words, rewriting, confluence, tensor legs, bases
    parser        input language for presets, expressions, and maps
    presets       the shipped algebra presentations
    hopf          coproduct / counit / antipode / star machinery and checks
    quantumgroup  quantum supergroup checks and coactions
    duality       dual-pairing evaluation and dual Hopf checks
    contraction   singular change of generators plus parameter limits
    lie           enveloping-algebra checks
    reports       check verdicts, findings, serialization
    cli           the qsv command line tool
"""

__version__ = "1.0.0"
