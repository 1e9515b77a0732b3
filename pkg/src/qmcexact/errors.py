class CapExceededError(RuntimeError):
    """A brute-force routine was asked for more work than its configured cap."""
