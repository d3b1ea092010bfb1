"""Binary grid format round-trips and deterministic CSV emission."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibervortex import fileio as fio


class TestGridRoundTrip:
    def test_complex_field_bit_exact(self, tmp_path):
        rng = np.random.RandomState(0)
        data = (rng.randn(1, 32, 32, 32) + 1j * rng.randn(1, 32, 32, 32))
        path = tmp_path / "f.psi1"
        fio.write_grid(path, fio.MAGIC_PSI, data, (5e-8, 5e-8, 5e-8),
                       step=17, meta={"hello": "world"})
        back = fio.read_grid(path)
        assert back.magic == fio.MAGIC_PSI
        assert back.step == 17
        assert back.meta == {"hello": "world"}
        assert back.spacing == (5e-8, 5e-8, 5e-8)
        assert np.array_equal(back.data, data)
        assert back.data.dtype == np.complex128

    def test_multicomponent_real(self, tmp_path):
        rng = np.random.RandomState(1)
        data = rng.randn(3, 8, 10, 12)
        path = tmp_path / "g.gau"
        fio.write_grid(path, fio.MAGIC_GAUGE, data, (1e-7, 2e-7, 3e-7))
        back = fio.read_grid(path, expect_magic=fio.MAGIC_GAUGE)
        assert np.array_equal(back.data, data)

    def test_file_level_idempotence(self, tmp_path):
        """write(read(write(x))) produces identical bytes."""
        rng = np.random.RandomState(2)
        data = rng.randn(2, 6, 7, 8) + 1j * rng.randn(2, 6, 7, 8)
        p1 = tmp_path / "a.evf"
        p2 = tmp_path / "b.evf"
        fio.write_grid(p1, fio.MAGIC_FIELD, data, (1e-8, 1e-8, 1e-8),
                       meta={"k": 1})
        back = fio.read_grid(p1)
        fio.write_grid(p2, back.magic, back.data, back.spacing,
                       step=back.step, meta=back.meta)
        assert p1.read_bytes() == p2.read_bytes()

    def test_x_fastest_ordering(self, tmp_path):
        """Payload linear index runs x fastest within each component."""
        data = np.arange(2 * 3 * 4, dtype=float).reshape(1, 2, 3, 4)
        path = tmp_path / "o.gau"
        fio.write_grid(path, fio.MAGIC_GAUGE, data, (1.0, 1.0, 1.0))
        raw = path.read_bytes()
        header_len = fio._HEADER.size + len(b"{}")
        payload = np.frombuffer(raw[header_len:], dtype="<f8")
        # linear order: (x=0,y=0,z=0), (x=1,y=0,z=0), then (x=0,y=1,z=0)
        assert payload[0] == data[0, 0, 0, 0]
        assert payload[1] == data[0, 1, 0, 0]
        assert payload[2] == data[0, 0, 1, 0]

    @settings(max_examples=15, deadline=None)
    @given(nx=st.integers(2, 9), ny=st.integers(2, 9), nz=st.integers(2, 9),
           ncomp=st.integers(1, 3), cplx=st.booleans())
    def test_round_trip_property(self, tmp_path_factory, nx, ny, nz, ncomp, cplx):
        rng = np.random.RandomState(nx * ny * nz)
        data = rng.randn(ncomp, nx, ny, nz)
        if cplx:
            data = data + 1j * rng.randn(ncomp, nx, ny, nz)
        path = tmp_path_factory.mktemp("rt") / "f.evf"
        fio.write_grid(path, fio.MAGIC_FIELD, data, (1e-8, 2e-8, 3e-8))
        assert np.array_equal(fio.read_grid(path).data, data)


class TestErrors:
    def test_bad_magic_with_upgrade_hint(self, tmp_path):
        path = tmp_path / "f.bin"
        fio.write_grid(path, fio.MAGIC_FIELD, np.zeros((2, 2, 2)), (1, 1, 1))
        raw = bytearray(path.read_bytes())
        raw[:4] = b"EVF2"
        path.write_bytes(bytes(raw))
        with pytest.raises(fio.BadMagic, match="version"):
            fio.read_grid(path)

    def test_unknown_magic(self, tmp_path):
        path = tmp_path / "f.bin"
        path.write_bytes(b"NOPE" + b"\x00" * 100)
        with pytest.raises(fio.BadMagic):
            fio.read_grid(path)

    def test_wrong_expected_magic(self, tmp_path):
        path = tmp_path / "f.evf"
        fio.write_grid(path, fio.MAGIC_FIELD, np.zeros((2, 2, 2)), (1, 1, 1))
        with pytest.raises(fio.BadMagic):
            fio.read_grid(path, expect_magic=fio.MAGIC_PSI)

    def test_truncated_payload_names_counts(self, tmp_path):
        path = tmp_path / "f.evf"
        fio.write_grid(path, fio.MAGIC_FIELD, np.zeros((4, 4, 4)), (1, 1, 1))
        raw = path.read_bytes()
        path.write_bytes(raw[:-40])
        with pytest.raises(fio.TruncatedPayload, match="expected"):
            fio.read_grid(path)

    def test_trailing_bytes_rejected(self, tmp_path):
        path = tmp_path / "f.evf"
        fio.write_grid(path, fio.MAGIC_FIELD, np.zeros((4, 4, 4)), (1, 1, 1))
        path.write_bytes(path.read_bytes() + b"\x00" * 8)
        with pytest.raises(fio.DimMismatch):
            fio.read_grid(path)

    def test_refuse_unknown_magic_on_write(self, tmp_path):
        with pytest.raises(fio.BadMagic):
            fio.write_grid(tmp_path / "x.bin", b"XXXX", np.zeros((2, 2, 2)),
                           (1, 1, 1))


class TestCsv:
    def test_observables_columns(self, tmp_path):
        rows = [{c: float(i) for i, c in enumerate(fio.OBSERVABLE_COLUMNS)}]
        rows[0]["step"] = 3
        path = tmp_path / "obs.csv"
        fio.write_observables_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(fio.OBSERVABLE_COLUMNS)
        assert lines[1].split(",")[0] == "3"

    def test_deterministic_output(self, tmp_path):
        rows = [{c: np.pi * (i + 1) for c in fio.OBSERVABLE_COLUMNS}
                for i in range(4)]
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        fio.write_observables_csv(p1, rows)
        fio.write_observables_csv(p2, rows)
        assert p1.read_bytes() == p2.read_bytes()

    def test_floats_round_trip(self, tmp_path):
        vals = [1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 2**-52]
        for v in vals:
            assert float(fio.format_float(v)) == v


def test_config_hash_stability():
    assert fio.config_hash("a = 1\n") == fio.config_hash("a = 1\n")
    assert fio.config_hash("a = 1\n") != fio.config_hash("a = 2\n")


def test_mesh_writer(tmp_path):
    verts = np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0]])
    faces = np.array([[0, 1, 2]])
    path = tmp_path / "m.mesh"
    fio.write_mesh(path, verts, faces)
    lines = path.read_text().splitlines()
    assert lines[0] == "3 1"
    assert lines[1].startswith("v ")
    assert lines[-1] == "f 0 1 2"
