import numpy as np
import pytest

from diracab.confmap import (
    AFRICA,
    HEART,
    BilliardShape,
    UnivalenceError,
    billiard_area,
    boundary,
    boundary_to_csv,
    check_univalent,
    invert_map,
    normal_angle_at,
    resolve_shape,
)

# direct evaluations of the closed form, frozen at extended precision
HEART_W_PLUS1 = 1.2246897089156510812
HEART_W_MINUS1 = -0.41918909499797453115


class TestMap:
    def test_origin_is_fixed(self):
        for shape in (HEART, AFRICA, BilliardShape(0.3, 0.1, 1.0)):
            assert shape.map(0.0) == 0.0

    def test_heart_rightmost_point(self):
        assert HEART.map(1.0) == pytest.approx(HEART_W_PLUS1, abs=1e-14)

    def test_heart_leftmost_point(self):
        assert HEART.map(-1.0) == pytest.approx(HEART_W_MINUS1, abs=1e-14)

    def test_africa_boundary_value(self):
        want = (1.0 + 0.2 + 0.2 * np.exp(1j * np.pi / 3)) / np.sqrt(1.2)
        assert AFRICA.map(1.0) == pytest.approx(want, abs=1e-14)

    def test_heart_mirror_symmetry(self):
        z = 0.7 * np.exp(1j * np.linspace(0, 2 * np.pi, 64))
        np.testing.assert_array_equal(HEART.map(np.conj(z)),
                                      np.conj(HEART.map(z)))

    def test_norm_closed_form(self):
        s = BilliardShape(0.31, 0.17, 0.5)
        assert s.norm == pytest.approx(
            np.sqrt(1 + 2 * 0.31**2 + 3 * 0.17**2), abs=1e-16
        )


class TestJacobian:
    def test_value_at_origin(self):
        for shape in (HEART, AFRICA):
            assert shape.jacobian_sq(0.0) == pytest.approx(
                1.0 / shape.norm**2, rel=1e-14
            )

    @pytest.mark.parametrize("shape", [HEART, AFRICA])
    @pytest.mark.parametrize("r", [0.2, 0.55, 0.9, 1.0])
    def test_angular_average_closed_form(self, shape, r):
        # (2 pi)^-1 integral of |w'|^2 over the circle of radius r equals
        # the diagonal angular-integral row (1 + 4 b^2 r^2 + 9 c^2 r^4)/norm^2
        theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
        avg = np.mean(shape.jacobian_sq(r * np.exp(1j * theta)))
        want = (1 + 4 * shape.b**2 * r**2 + 9 * shape.c**2 * r**4) / shape.norm**2
        assert avg == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("shape", [HEART, AFRICA])
    def test_area_quadrature_and_shoelace(self, shape):
        # conformal area formula: integral of |w'|^2 over the disk
        from diracab.quadrature import radial_rule

        r, wr = radial_rule(256)
        theta = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
        z = r[:, None] * np.exp(1j * theta[None, :])
        quad_area = np.sum(
            wr[:, None] * r[:, None] * shape.jacobian_sq(z)
        ) * (2 * np.pi / len(theta))
        assert quad_area == pytest.approx(billiard_area(shape), rel=1e-10)

        # independent oracle: shoelace area of a dense boundary polygon
        poly = boundary(shape, 1 << 14)
        p = poly.position
        shoelace = 0.5 * np.sum(
            p.real * np.roll(p.imag, -1) - np.roll(p.real, -1) * p.imag
        )
        assert shoelace == pytest.approx(billiard_area(shape), rel=1e-6)

    def test_positive_on_disk_for_presets(self):
        rng = np.random.default_rng(7)
        z = rng.uniform(-1, 1, 4000) + 1j * rng.uniform(-1, 1, 4000)
        z = z[np.abs(z) <= 1.0]
        for shape in (HEART, AFRICA):
            assert np.min(shape.jacobian_sq(z)) > 0


class TestBoundary:
    def test_point_on_symmetry_axis(self):
        poly = boundary(HEART, 256)
        assert poly.position[0] == pytest.approx(HEART_W_PLUS1, abs=1e-12)
        assert poly.normal_angle[0] == pytest.approx(0.0, abs=1e-12)

    def test_point_opposite_axis(self):
        poly = boundary(HEART, 256)
        i = 128  # phi = pi
        assert poly.position[i] == pytest.approx(HEART_W_MINUS1, abs=1e-12)
        assert abs(poly.normal_angle[i] % (2 * np.pi) - np.pi) < 1e-12

    def test_total_arclength_matches_speed_integral(self):
        poly = boundary(AFRICA, 1 << 13)
        phi = np.linspace(0, 2 * np.pi, 1 << 16, endpoint=False)
        want = np.mean(np.abs(AFRICA.dmap(np.exp(1j * phi)))) * 2 * np.pi
        assert poly.total_length == pytest.approx(want, rel=1e-6)

    def test_normal_winds_once(self):
        for shape in (HEART, AFRICA):
            poly = boundary(shape, 4096)
            wind = poly.normal_angle[-1] - poly.normal_angle[0]
            # unwrapped; last point is one step short of full circuit
            step = poly.normal_angle[1] - poly.normal_angle[0]
            assert wind == pytest.approx(2 * np.pi, abs=0.1 + abs(step))

    def test_positions_lie_on_wall(self):
        poly = boundary(AFRICA, 512)
        z = np.exp(1j * poly.phi)
        np.testing.assert_allclose(np.abs(poly.position - AFRICA.map(z)),
                                   0.0, atol=1e-10)

    def test_minimum_point_count(self):
        with pytest.raises(ValueError):
            boundary(HEART, 32)

    def test_csv_export(self, tmp_path):
        poly = boundary(HEART, 128)
        path = tmp_path / "wall.csv"
        boundary_to_csv(poly, path)
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert data.shape == (128, 4)
        np.testing.assert_allclose(data[:, 1], poly.position.real, atol=1e-12)


class TestResolveAndUnivalence:
    def test_presets_by_name(self):
        assert resolve_shape("heart") is HEART
        assert resolve_shape("africa") is AFRICA
        with pytest.raises(KeyError):
            resolve_shape("pear")

    def test_triple(self):
        s = resolve_shape((0.1, 0.05, 0.3))
        assert isinstance(s, BilliardShape)

    def test_univalence_guard_rejects_folded_map(self):
        # b large enough that w' vanishes on the boundary
        with pytest.raises(UnivalenceError):
            check_univalent(BilliardShape(0.8, 0.0, 0.0))


class TestInverse:
    @pytest.mark.parametrize("shape", [HEART, AFRICA])
    def test_roundtrip_interior(self, shape):
        rng = np.random.default_rng(3)
        z = rng.uniform(0.02, 0.98, 200) * np.exp(
            1j * rng.uniform(0, 2 * np.pi, 200)
        )
        back = invert_map(shape, shape.map(z))
        np.testing.assert_allclose(back, z, atol=1e-11)

    def test_boundary_points(self):
        z = np.exp(1j * np.linspace(0.1, 6.0, 50))
        back = invert_map(HEART, HEART.map(z))
        np.testing.assert_allclose(back, z, atol=1e-9)


def test_normal_angle_helper_matches_boundary():
    poly = boundary(AFRICA, 256)
    angles = normal_angle_at(AFRICA, poly.phi)
    diff = (angles - poly.normal_angle + np.pi) % (2 * np.pi) - np.pi
    np.testing.assert_allclose(diff, 0.0, atol=1e-10)
