import numpy as np
import pytest

from contourflow.autoinit import (circle_to_contour, circumscribed_circle,
                                  inscribed_circle, iterative_circle_fit,
                                  minimal_enclosing_circle)
from contourflow.edt import edt_from_sites
from contourflow.fields import rasterize
from contourflow.shapes import disk_mask, random_blob_mask, rectangle_mask

from oracles import mec_reference


def dilate8(mask):
    padded = np.pad(mask, 1)
    out = np.zeros_like(mask)
    for dv in (-1, 0, 1):
        for du in (-1, 0, 1):
            out |= padded[1 + dv: mask.shape[0] + 1 + dv,
                          1 + du: mask.shape[1] + 1 + du]
    return out


class TestInscribed:
    def test_disk_recovers_center_and_radius(self):
        circle = inscribed_circle(disk_mask(64, 64, (32.0, 32.0), 10.0))
        assert abs(circle.center[0] - 32.0) <= 1.0
        assert abs(circle.center[1] - 32.0) <= 1.0
        assert abs(circle.radius - 10.0) <= 1.0

    def test_rectangle_inradius(self):
        mask = rectangle_mask(64, 64, (30.0, 30.0), 14.0, 9.0)
        circle = inscribed_circle(mask)
        assert abs(circle.radius - 9.5) <= 1.0
        assert abs(circle.center[1] - 30.0) <= 1.0

    def test_radius_matches_brute_interior_distance(self, rng):
        # the exact construction is the argmax of the distance to background
        for _ in range(10):
            mask = random_blob_mask(rng, 48, 48)
            circle = inscribed_circle(mask)
            padded = np.pad(mask, 1, constant_values=False)
            interior = edt_from_sites(~padded)[1:-1, 1:-1]
            assert circle.radius == pytest.approx(interior[mask].max(), abs=0)
            # no pixel center admits a circle one pixel larger
            assert (interior[mask] < circle.radius + 1.0).all()

    def test_tie_breaks_lexicographic(self):
        mask = np.zeros((6, 8), dtype=bool)
        mask[1, 2] = mask[1, 5] = mask[3, 2] = True  # isolated pixels, equal radius
        circle = inscribed_circle(mask)
        assert circle.center == (2.0, 1.0)

    def test_empty_mask_rejected(self):
        with pytest.raises(ValueError):
            inscribed_circle(np.zeros((8, 8), dtype=bool))


class TestCircumscribed:
    def test_single_pixel(self):
        mask = np.zeros((8, 8), dtype=bool)
        mask[3, 5] = True
        circle = circumscribed_circle(mask)
        assert circle.center == pytest.approx((5.0, 3.0))
        assert circle.radius == pytest.approx(0.5)

    def test_two_pixels_diameter(self):
        mask = np.zeros((12, 12), dtype=bool)
        mask[2, 2] = mask[8, 10] = True
        circle = circumscribed_circle(mask)
        d = np.hypot(8.0, 6.0)
        assert circle.radius == pytest.approx(d / 2.0 + 0.5, abs=1e-9)
        assert circle.center == pytest.approx((6.0, 5.0), abs=1e-9)

    def test_matches_enumeration_oracle(self, rng):
        for _ in range(15):
            mask = random_blob_mask(rng, 40, 40)
            circle = circumscribed_circle(mask)
            pts = np.argwhere(mask)[:, ::-1].astype(float)  # (u, v)
            want = mec_reference(pts)
            assert abs((circle.radius - 0.5) - want[2]) <= 1e-6
            # all foreground centers are covered
            d = np.hypot(pts[:, 0] - circle.center[0], pts[:, 1] - circle.center[1])
            assert d.max() <= circle.radius - 0.5 + 1e-9

    def test_translation_invariance(self):
        base = np.zeros((40, 40), dtype=bool)
        base[8:16, 6:20] = True
        base[14:22, 10:14] = True
        moved = np.roll(np.roll(base, 7, axis=0), 5, axis=1)
        a = circumscribed_circle(base)
        b = circumscribed_circle(moved)
        assert b.center[0] - a.center[0] == pytest.approx(5.0, abs=1e-9)
        assert b.center[1] - a.center[1] == pytest.approx(7.0, abs=1e-9)
        assert b.radius == pytest.approx(a.radius, abs=1e-9)

    def test_mec_determinism(self, rng):
        pts = rng.uniform(0, 30, size=(40, 2))
        assert minimal_enclosing_circle(pts) == minimal_enclosing_circle(pts)

    def test_mec_collinear_and_duplicate_points(self):
        collinear = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [1.0, 1.0]])
        cu, cv, r = minimal_enclosing_circle(collinear)
        assert r == pytest.approx(np.hypot(1.5, 1.5), abs=1e-9)
        assert (cu, cv) == pytest.approx((1.5, 1.5), abs=1e-9)
        repeated = np.array([[2.0, 5.0]] * 4)
        assert minimal_enclosing_circle(repeated) == (2.0, 5.0, 0.0)


class TestIterativeFit:
    def test_disk_close_to_exact(self):
        mask = disk_mask(64, 64, (31.0, 33.0), 11.0)
        for mode, exact in (("inscribed", inscribed_circle(mask)),
                            ("circumscribed", circumscribed_circle(mask))):
            fit = iterative_circle_fit(mask, mode)
            assert abs(fit.radius - exact.radius) <= 1.0
            assert abs(fit.center[0] - exact.center[0]) <= 1.0
            assert abs(fit.center[1] - exact.center[1]) <= 1.0

    def test_inscribed_never_exceeds_exact_by_much(self, rng):
        for _ in range(50):
            mask = random_blob_mask(rng, 32, 32)
            fit = iterative_circle_fit(mask, "inscribed")
            exact = inscribed_circle(mask)
            assert fit.radius <= exact.radius + 0.5

    def test_circumscribed_never_falls_below_exact_by_much(self, rng):
        for _ in range(50):
            mask = random_blob_mask(rng, 32, 32)
            fit = iterative_circle_fit(mask, "circumscribed")
            exact = circumscribed_circle(mask)
            assert fit.radius >= exact.radius - 0.5

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            iterative_circle_fit(np.ones((4, 4), dtype=bool), "bogus")


class TestCircleToContour:
    def test_four_node_square(self):
        from contourflow.fields import Circle
        contour = circle_to_contour(Circle((5.0, 5.0), 1.0), 4, 16, 16)
        want = np.array([[6.0, 5.0], [5.0, 6.0], [4.0, 5.0], [5.0, 4.0]])
        assert np.allclose(contour.nodes, want, atol=1e-12)

    def test_perimeter_approaches_circle(self):
        from contourflow.fields import Circle
        r = 9.0
        contour = circle_to_contour(Circle((32.0, 32.0), r), 60, 64, 64)
        want = 2 * 60 * r * np.sin(np.pi / 60)
        assert contour.perimeter == pytest.approx(want, abs=1e-9)
        assert abs(contour.perimeter - 2 * np.pi * r) <= 0.005 * 2 * np.pi * r

    def test_clamped_near_corner(self):
        from contourflow.fields import Circle
        contour = circle_to_contour(Circle((2.0, 2.0), 6.0), 24, 16, 16)
        assert contour.nodes.min() >= 0.0
        assert contour.nodes.max() <= 15.0

    def test_orientation_positive(self):
        from contourflow.fields import Circle
        contour = circle_to_contour(Circle((8.0, 8.0), 3.0), 12, 16, 16)
        assert contour.area > 0


class TestContainmentInvariants:
    def test_inscribed_raster_inside_mask_band(self, rng):
        for _ in range(10):
            mask = random_blob_mask(rng, 48, 48)
            contour = circle_to_contour(inscribed_circle(mask), 60, 48, 48)
            raster = rasterize(contour, 48, 48)
            assert not (raster & ~dilate8(mask)).any()

    def test_mask_inside_circumscribed_raster_band(self, rng):
        for _ in range(10):
            mask = random_blob_mask(rng, 48, 48)
            contour = circle_to_contour(circumscribed_circle(mask), 60, 48, 48)
            raster = rasterize(contour, 48, 48)
            assert not (mask & ~dilate8(raster)).any()
