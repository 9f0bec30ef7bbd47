"""``wmkit`` command line: embed, extract, protect, unprotect, channel, evaluate.

Exit codes: 0 success, 1 usage error, 2 data or format error. Reports go to
stdout as ``key=value`` lines.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import channel, fec, schemes, signal_io
from .errors import UnsupportedFormat, WatermarkError
from .metrics import ber, fidelity
from .transform import dct1d, dct2d, zigzag_scan

CLI_SCHEMES = {
    "interleave": "interleave",
    "dct-aa": "dct_audio_audio",
    "audio-in-image": "audio_in_image",
    "image-in-audio": "image_in_audio",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def format_value(value) -> str:
    """Report formatting: ints verbatim, floats to 9 significant digits."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if value == 0.0:
        return "0"
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if abs(value) < 1e-3:
        return f"{value:.8e}"
    return f"{value:.9g}"


def emit(out, **pairs) -> None:
    for name, value in pairs.items():
        if value is None:
            continue
        out.write(f"{name}={value if isinstance(value, str) else format_value(value)}\n")


def _emit_fidelity(out, report, scheme=None) -> None:
    emit(out, scheme=scheme, mse=report.mse, snr_db=report.snr_db, n=report.n)


def _warn_clipping(clip: signal_io.AudioClip, err) -> None:
    over = int(np.count_nonzero(np.abs(clip.samples) > 1.0))
    if over:
        err.write(f"warning: {over} samples exceed full scale and were clipped\n")


def _read_key(path) -> schemes.EmbedKey:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise signal_io.IoFailure(f"cannot read key {path}: {exc}") from exc
    return schemes.EmbedKey.from_text(text)


# --------- commands ---------

def cmd_embed(args, out, err) -> int:
    scheme = CLI_SCHEMES[args.scheme]
    if scheme == "audio_in_image":
        cover = signal_io.read_pgm(args.cover)
        wm = signal_io.read_audio(args.watermark)
    elif scheme == "image_in_audio":
        cover = signal_io.read_audio(args.cover)
        wm = signal_io.read_pgm(args.watermark)
    else:
        cover = signal_io.read_audio(args.cover)
        wm = signal_io.read_audio(args.watermark)
    if args.render_pgm and scheme != "audio_in_image":
        raise UsageError("--render-pgm applies only to audio-in-image")

    marked, key = schemes.embed(scheme, cover, wm, args.alpha)
    if scheme == "audio_in_image":
        signal_io.write_grid(marked, args.out)
        if args.render_pgm:
            signal_io.write_pgm(schemes.render_grid(marked), args.render_pgm)
    else:
        _warn_clipping(marked, err)
        signal_io.write_audio(marked, args.out)
        marked = signal_io.quantize(marked)
    signal_io.atomic_write(args.key, key.to_text().encode())
    _emit_fidelity(out, schemes.embedding_distortion(cover, marked, key), key.scheme)
    return 0


def cmd_extract(args, out, err) -> int:
    key = _read_key(args.key)
    if key.scheme == "audio_in_image":
        data = signal_io.read_bytes(args.input)
        marked = (signal_io.parse_pgm(data) if data[:2] in (b"P5", b"P2")
                  else signal_io.parse_grid(data))
    else:
        marked = signal_io.read_audio(args.input)

    if args.cover_out and key.scheme != "interleave":
        raise UsageError("--cover-out applies only to interleave")
    if key.scheme == "interleave":
        wm, cover = schemes.extract_interleave(marked, key)
        if args.cover_out:
            signal_io.write_audio(cover, args.cover_out)
    else:
        wm = schemes.extract(marked, key)

    if isinstance(wm, signal_io.GrayImage):
        signal_io.write_pgm(wm, args.out)
        recovered = wm.to_array().astype(np.float64)
        reference = signal_io.read_pgm(args.reference).to_array() if args.reference else None
    else:
        _warn_clipping(wm, err)
        signal_io.write_audio(wm, args.out)
        # compare what was actually written, i.e. after PCM16 quantization
        recovered = signal_io.quantize(wm).samples
        reference = signal_io.read_audio(args.reference).samples if args.reference else None

    if reference is None:
        emit(out, scheme=key.scheme, n=int(np.size(recovered)))
    else:
        _emit_fidelity(out, fidelity(reference, recovered), key.scheme)
    return 0


def cmd_protect(args, out, err) -> int:
    buf = signal_io.read_wav(args.input)
    stream = fec.protect(buf)
    signal_io.atomic_write(args.out, fec.stream_to_bytes(stream))
    emit(out, n=len(stream))
    return 0


def cmd_unprotect(args, out, err) -> int:
    stream = fec.stream_from_bytes(signal_io.read_bytes(args.input))
    buf, stats = fec.unprotect_with_stats(stream, args.sample_rate)
    signal_io.write_wav(buf, args.out)
    emit(out, n=len(buf), corrected_blocks=stats.corrected_blocks)
    return 0


def cmd_channel(args, out, err) -> int:
    if args.model == "bitflip" and args.p is None:
        raise UsageError("--model bitflip requires --p")
    if args.model == "awgn" and args.sigma is None:
        raise UsageError("--model awgn requires --sigma")
    try:
        spec = channel.ChannelSpec(args.model, args.seed, p=args.p or 0.0, sigma=args.sigma or 0.0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    data = signal_io.read_bytes(args.input)
    if spec.model == "lossless":
        signal_io.atomic_write(args.out, data)
        emit(out, n=len(data))
    elif spec.model == "bitflip":
        sent = fec.stream_from_bytes(data)
        received = channel.apply_bitflip(sent, spec)
        signal_io.atomic_write(args.out, fec.stream_to_bytes(received))
        emit(out, ber=ber(sent.bits, received.bits) if len(sent) else 0.0, n=len(sent))
    else:
        clip = signal_io.pcm_to_float(signal_io.parse_wav(data))
        noisy = signal_io.quantize(channel.apply_awgn(clip, spec))
        signal_io.write_audio(noisy, args.out)
        _emit_fidelity(out, fidelity(clip.samples, noisy.samples))
    return 0


def _load_any(path):
    """Classify a file by its magic bytes and return (kind, values)."""
    data = signal_io.read_bytes(path)
    if data[:4] == b"RIFF":
        return "audio", signal_io.pcm_to_float(signal_io.parse_wav(data)).samples
    if data[:2] in (b"P5", b"P2"):
        return "image", signal_io.parse_pgm(data).to_array().astype(np.float64)
    if data[:4] == signal_io.GRID_MAGIC:
        return "image", signal_io.parse_grid(data)
    return "bits", fec.stream_from_bytes(data).bits


def cmd_evaluate(args, out, err) -> int:
    kind_a, a = _load_any(args.a)
    kind_b, b = _load_any(args.b)
    if kind_a != kind_b:
        raise UnsupportedFormat(f"cannot compare {kind_a} with {kind_b}")
    if kind_a == "image" and a.shape != b.shape:
        raise UnsupportedFormat(f"image shapes differ: {a.shape} vs {b.shape}")
    if kind_a == "bits":
        rate = ber(a, b)
        emit(out, mse=rate, ber=rate, n=a.size)
    else:
        _emit_fidelity(out, fidelity(a, b))
    return 0


def cmd_spectrum(args, out, err) -> int:
    """Dump DCT coefficients in frequency order as CSV (index,coefficient)."""
    kind, values = _load_any(args.input)
    if kind == "audio":
        coeffs = dct1d(values)
    elif kind == "image":
        coeffs = zigzag_scan(dct2d(values))
    else:
        raise UnsupportedFormat("spectrum needs an audio or image file")
    buf = io.StringIO()
    buf.write("index,coefficient\n")
    for i, c in enumerate(coeffs):
        buf.write(f"{i},{c:.17g}\n")
    signal_io.atomic_write(args.out, buf.getvalue().encode())
    emit(out, n=coeffs.size)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wmkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="hide a watermark in a cover")
    p.add_argument("--scheme", required=True, choices=sorted(CLI_SCHEMES))
    p.add_argument("--cover", required=True)
    p.add_argument("--watermark", required=True)
    p.add_argument("--out", required=True, help="marked carrier (WAV, or DCTF grid for audio-in-image)")
    p.add_argument("--key", required=True, help="key sidecar to write")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--render-pgm", help="also write an 8-bit preview (audio-in-image)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a watermark")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--reference", help="original watermark, to report recovery MSE")
    p.add_argument("--cover-out", help="also write the recovered cover (interleave)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("protect", help="Hamming(15,11)-encode a WAV's PCM bitstream")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_protect)

    p = sub.add_parser("unprotect", help="decode a protected stream back to WAV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--sample-rate", type=int, default=44100)
    p.set_defaults(func=cmd_unprotect)

    p = sub.add_parser("channel", help="pass a file through a seeded noisy channel")
    p.add_argument("--model", required=True, choices=("bitflip", "awgn", "lossless"))
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("evaluate", help="compare two files of the same kind")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("spectrum", help="dump DCT coefficients of a WAV or image as CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out, err)
    except UsageError as exc:
        err.write(f"wmkit: usage error: {exc}\n")
        return 1
    except (WatermarkError, OSError) as exc:
        err.write(f"wmkit: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}\n")
        return 2
    except ValueError as exc:
        err.write(f"wmkit: invalid argument: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
