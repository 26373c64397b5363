from odic.exceptions import ArgumentError, OdicError


class BitstreamError(OdicError):
    """
    Base of every bitstream decoding error, `code` tells the failure kinds apart
    """

    code: int = 1


class BadMagicError(BitstreamError):
    """
    Occurs when the stream does not start with the codec magic
    """

    code = 10


class UnsupportedVersionError(BitstreamError):
    """
    Occurs when the stream was written by an unknown format version
    """

    code = 11


class CorruptHeaderError(BitstreamError):
    """
    Occurs when header fields are inconsistent or out of range
    """

    code = 12


class TruncatedPayloadError(BitstreamError):
    """
    Occurs when the mask or the latent payload ends before the decoder is done
    """

    code = 13


class MissingSaliencyError(ArgumentError):
    """
    Occurs when saliency mode is on and no saliency map was given
    """


class LadderIndexError(ArgumentError):
    """
    Occurs when a lambda index falls outside the configured ladder
    """


class CorruptPayloadError(BitstreamError):
    """
    Occurs when entropy coded data can't have been produced by the encoder's models
    """

    code = 14
