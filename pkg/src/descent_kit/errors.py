class TheoremViolation(RuntimeError):
    """A verified theorem failed on concrete data.

    Expected never on well-formed inputs; reaching this means the
    implementation (not the mathematics) is broken, and the message carries
    the offending instance.
    """
