"""Green points: predimension calculus, rotundity, amalgamation, and the spiral model."""
