"""Exception hierarchy. Every failure the toolkit raises derives from EigenExprError."""


class EigenExprError(Exception):
    """Base class for all toolkit errors."""


class LinalgError(EigenExprError):
    pass


class DimensionError(LinalgError):
    pass


class NotSymmetricError(LinalgError):
    pass


class NonFiniteError(LinalgError):
    pass


class ConvergenceError(LinalgError):
    def __init__(self, message, off_norm):
        super().__init__(message)
        self.off_norm = off_norm


class ImageFormatError(EigenExprError):
    pass


class IngestError(EigenExprError):
    """Manifest or image loading failure; carries the manifest row and path when known."""

    def __init__(self, message, row=None, path=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if path is not None:
            where.append(f"path {path}")
        full = f"{message} ({', '.join(where)})" if where else message
        super().__init__(full)
        self.row = row
        self.path = path


class TrainError(EigenExprError):
    pass


class ModelFormatError(EigenExprError):
    pass


class ModelVersionError(ModelFormatError):
    pass


class ClassifyError(EigenExprError):
    pass


class EvalError(EigenExprError):
    pass
