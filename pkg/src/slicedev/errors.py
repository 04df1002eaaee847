import json


class TheoremViolation(AssertionError):
    """A proven inequality failed beyond tolerance.

    Raised (or recorded) only when the implementation is wrong; ``payload``
    holds everything needed to replay the failing case.
    """

    def __init__(self, message: str, payload: dict | None = None):
        self.payload = payload or {}
        super().__init__(f"{message}\nreplay: {json.dumps(self.payload, sort_keys=True)}")
