class MooreError(Exception):
    exit_code = 3
    message = "An unexpected error occurred."
    payload = None

    def __init__(self, message=None, exit_code=None, payload=None):
        super().__init__(message or self.message)
        if exit_code is not None:
            self.exit_code = exit_code
        if message is not None:
            self.message = message
        self.payload = payload

    def to_dict(self):
        rv = dict(self.payload or ())
        rv["message"] = self.message
        rv["status"] = "error"
        return rv


class MooreValidationError(MooreError):
    exit_code = 2
    message = "Parameter validation failed."


class MoorePreconditionError(MooreError):
    exit_code = 2
    message = "The operation's hypotheses are not met by this input."


class MooreSizeLimitError(MooreError):
    exit_code = 2
    message = "The input exceeds the supported size for this operation."


class MooreInputError(MooreError):
    exit_code = 3
    message = "The input could not be read."


class MGFParseError(MooreInputError):
    message = "Malformed MGF input."

    def __init__(self, message=None, line=None, payload=None):
        payload = dict(payload or ())
        if line is not None:
            payload["line"] = line
            message = f"line {line}: {message or self.message}"
        super().__init__(message, payload=payload)
        self.line = line


class DigonViolationError(MooreInputError):
    message = "Opposite arcs u->v and v->u must be given as an edge."


class RepeatExtractionError(MooreError):
    exit_code = 1
    message = "The graph does not have a well-defined repeat permutation."

    def __init__(self, message=None, stage=None, row=None, payload=None):
        payload = dict(payload or ())
        if stage is not None:
            payload["stage"] = stage
        if row is not None:
            payload["row"] = row
        super().__init__(message, payload=payload)
        self.stage = stage
        self.row = row
