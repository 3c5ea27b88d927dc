"""Shared exception types."""


class PropertyViolation(Exception):
    """A certified mathematical property failed to hold on a concrete instance.

    Distinct from usage errors: the CLI maps this to exit code 3 so that CI can
    tell a regression in the math apart from a bad invocation.
    """
