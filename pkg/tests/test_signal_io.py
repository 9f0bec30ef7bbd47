import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from wmkit.errors import MalformedFile, UnsupportedFormat, WatermarkError
from wmkit.signal_io import (
    AudioClip,
    GrayImage,
    PcmBuffer,
    float_to_pcm,
    parse_grid,
    parse_pgm,
    parse_wav,
    pcm_to_float,
    read_pgm,
    read_wav,
    serialize_grid,
    serialize_pgm,
    serialize_wav,
    write_pgm,
    write_wav,
)


def _wav(fmt_fields, data=b"", extra=b""):
    fmt = struct.pack("<HHIIHH", *fmt_fields)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + extra
    body += b"data" + struct.pack("<I", len(data)) + data
    return b"RIFF" + struct.pack("<I", len(body)) + body


class TestWav:
    def test_single_zero_sample(self):
        buf = parse_wav(_wav((1, 1, 8000, 16000, 2, 16), b"\x00\x00"))
        assert buf.words.tolist() == [0]
        assert buf.sample_rate == 8000

    def test_stereo_rejected(self):
        with pytest.raises(UnsupportedFormat):
            parse_wav(_wav((1, 2, 8000, 32000, 4, 16), b"\x00" * 4))

    @pytest.mark.parametrize("fields", [
        (1, 1, 8000, 24000, 3, 24),
        (3, 1, 8000, 32000, 4, 32),
        (0xFFFE, 1, 8000, 16000, 2, 16),
    ])
    def test_other_encodings_rejected(self, fields):
        with pytest.raises(UnsupportedFormat):
            parse_wav(_wav(fields, b"\x00" * 12))

    def test_boundary_words_round_trip(self, tmp_path):
        buf = PcmBuffer([-32768, 0, 32767], 44100)
        write_wav(buf, tmp_path / "b.wav")
        assert read_wav(tmp_path / "b.wav") == buf

    def test_empty_buffer(self, tmp_path):
        write_wav(PcmBuffer([], 8000), tmp_path / "e.wav")
        raw = (tmp_path / "e.wav").read_bytes()
        assert len(raw) == 44
        assert struct.unpack_from("<I", raw, 40)[0] == 0
        assert len(read_wav(tmp_path / "e.wav")) == 0

    def test_header_fields(self):
        raw = serialize_wav(PcmBuffer([1, -1], 8000))
        assert raw[:4] == b"RIFF" and raw[8:16] == b"WAVEfmt "
        code, channels, rate, byte_rate, align, bits = struct.unpack_from("<HHIIHH", raw, 20)
        assert (code, channels, rate, byte_rate, align, bits) == (1, 1, 8000, 16000, 2, 16)
        assert struct.unpack_from("<I", raw, 4)[0] == len(raw) - 8

    def test_metadata_chunks_skipped(self):
        odd = b"LIST" + struct.pack("<I", 3) + b"abc" + b"\x00"  # odd size gets a pad byte
        buf = parse_wav(_wav((1, 1, 16000, 32000, 2, 16), b"\x01\x00\xff\xff", extra=odd))
        assert buf.words.tolist() == [1, -1]

    @pytest.mark.parametrize("raw", [
        b"",
        b"RIFX\x00\x00\x00\x00WAVE",
        b"RIFF\x00\x00\x00\x00WAVX",
        b"RIFF\x04\x00\x00\x00WAVE",
    ])
    def test_bad_magic_or_missing_chunks(self, raw):
        with pytest.raises(MalformedFile):
            parse_wav(raw)

    def test_truncated_data_chunk(self):
        raw = _wav((1, 1, 8000, 16000, 2, 16), b"\x00" * 10)
        with pytest.raises(MalformedFile):
            parse_wav(raw[:-4])

    def test_odd_data_size(self):
        with pytest.raises(MalformedFile):
            parse_wav(_wav((1, 1, 8000, 16000, 2, 16), b"\x00" * 3))

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.int16, st.integers(0, 300)), st.integers(1, 192000))
    def test_round_trip_property(self, words, rate):
        buf = PcmBuffer(words, rate)
        assert parse_wav(serialize_wav(buf)) == buf


class TestPgm:
    def test_one_pixel(self, tmp_path):
        img = GrayImage(1, 1, [0])
        write_pgm(img, tmp_path / "a.pgm")
        assert read_pgm(tmp_path / "a.pgm") == img

    def test_two_by_two(self, tmp_path):
        img = GrayImage(2, 2, [0, 255, 128, 64])
        write_pgm(img, tmp_path / "b.pgm")
        assert (tmp_path / "b.pgm").read_bytes() == b"P5\n2 2\n255\n\x00\xff\x80\x40"
        assert read_pgm(tmp_path / "b.pgm") == img

    def test_ascii_rejected(self):
        with pytest.raises(UnsupportedFormat):
            parse_pgm(b"P2\n1 1\n255\n0\n")

    def test_maxval_rejected(self):
        with pytest.raises(UnsupportedFormat):
            parse_pgm(b"P5\n1 1\n65535\n\x00\x00")

    def test_comments_in_header(self):
        img = parse_pgm(b"P5\n# made by hand\n3 1\n# max\n255\n\x01\x02\x03")
        assert img.pixels.tolist() == [1, 2, 3]

    @pytest.mark.parametrize("raw", [
        b"",
        b"P6\n1 1\n255\n\x00",
        b"P5\n2 2\n255\n\x00",
        b"P5\n2 x\n255\n\x00\x00",
        b"P5\n0 2\n255\n",
        b"P5\n1 1\n255",
    ])
    def test_malformed(self, raw):
        with pytest.raises(MalformedFile):
            parse_pgm(raw)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 20), st.integers(1, 20), st.data())
    def test_round_trip_property(self, w, h, data):
        pixels = data.draw(arrays(np.uint8, w * h))
        img = GrayImage(w, h, pixels)
        assert parse_pgm(serialize_pgm(img)) == img


class TestConversions:
    @pytest.mark.parametrize("word, value", [(0, 0.0), (-32768, -1.0), (16384, 0.5)])
    def test_pcm_to_float(self, word, value):
        assert pcm_to_float(PcmBuffer([word], 8000)).samples.tolist() == [value]

    @pytest.mark.parametrize("value, word", [(0.0, 0), (1.0, 32767), (-0.5, -16384), (-1.5, -32768)])
    def test_float_to_pcm(self, value, word):
        assert float_to_pcm(AudioClip([value], 8000)).words.tolist() == [word]

    def test_largest_positive(self):
        assert pcm_to_float(PcmBuffer([32767], 8000)).samples[0] == pytest.approx(0.99997, abs=1e-5)

    @settings(max_examples=100, deadline=None)
    @given(arrays(np.float64, st.integers(1, 200), elements=st.floats(-1, 1)))
    def test_quantization_error_and_idempotence(self, samples):
        clip = AudioClip(samples, 8000)
        once = pcm_to_float(float_to_pcm(clip))
        assert np.all(np.abs(once.samples - clip.samples) <= 1 / 32768)
        twice = pcm_to_float(float_to_pcm(once))
        assert twice == once


class TestGrid:
    def test_round_trip(self):
        grid = np.random.default_rng(0).standard_normal((3, 5))
        raw = serialize_grid(grid)
        assert raw[:4] == b"DCTF" and len(raw) == 16 + 8 * 15
        assert struct.unpack_from("<II", raw, 4) == (5, 3)
        assert np.array_equal(parse_grid(raw), grid)

    @pytest.mark.parametrize("raw", [b"", b"DCTX" + bytes(12), b"DCTF" + struct.pack("<III", 1, 1, 0)])
    def test_malformed(self, raw):
        with pytest.raises(MalformedFile):
            parse_grid(raw)


def test_parsers_raise_only_typed_errors_on_mutations():
    rng = np.random.default_rng(5)
    seeds = [serialize_wav(PcmBuffer([1, 2, 3], 8000)), serialize_pgm(GrayImage(2, 2, [1, 2, 3, 4]))]
    for base in seeds:
        for _ in range(300):
            raw = bytearray(base)
            for _ in range(rng.integers(1, 4)):
                raw[rng.integers(len(raw))] = rng.integers(256)
            raw = bytes(raw[: rng.integers(len(raw) + 1)])
            for parse in (parse_wav, parse_pgm):
                try:
                    parse(raw)
                except WatermarkError:
                    pass
