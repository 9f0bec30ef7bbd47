"""Audio and image watermarking with DCT coefficient replacement and Hamming FEC."""

from .channel import ChannelSpec, apply_awgn, apply_bitflip
from .errors import (
    BadBlockSize,
    DimensionMismatch,
    EmptyInput,
    IoFailure,
    KeyMismatch,
    LengthMismatch,
    MalformedFile,
    MalformedStream,
    UnsupportedFormat,
    WatermarkError,
    WatermarkTooLong,
    ZeroReference,
)
from .fec import BitStream, hamming_decode_block, hamming_encode_block, protect, unprotect
from .metrics import FidelityReport, ber, mse, snr_db
from .schemes import (
    EmbedKey,
    embed_audio_in_image,
    embed_dct_aa,
    embed_image_in_audio,
    embed_interleave,
    embedding_distortion,
    extract_audio_in_image,
    extract_dct_aa,
    extract_image_in_audio,
    extract_interleave,
)
from .signal_io import (
    AudioClip,
    GrayImage,
    PcmBuffer,
    float_to_pcm,
    pcm_to_float,
    read_pgm,
    read_wav,
    write_pgm,
    write_wav,
)
from .transform import dct1d, dct2d, idct1d, idct2d, zigzag_order, zigzag_scan, zigzag_unscan

__version__ = "0.1.0"
