import pytest

from contourflow.shapes import (Fixture, bitten_disk_mask, disk_mask, full_suite,
                                random_blob_mask, rectangle_mask, star_mask, suite,
                                u_shape_mask)


def test_suite_contents():
    names = [fx.name for fx in suite(64)]
    assert names == ["disk", "rectangle", "star", "u_shape", "bitten_disk"]
    assert len(full_suite()) == 10
    assert {fx.size for fx in full_suite()} == {64, 128}


def test_fixtures_are_proper_masks():
    for fx in full_suite():
        assert fx.mask.dtype == bool
        assert fx.mask.any() and not fx.mask.all()
        assert fx.init_mode in ("inscribed", "circumscribed")


def test_concavity_flags():
    by_name = {fx.name: fx for fx in suite(64)}
    assert not by_name["disk"].concave
    assert not by_name["rectangle"].concave
    assert by_name["star"].concave
    assert by_name["u_shape"].concave
    assert by_name["bitten_disk"].concave


def test_u_shape_has_a_slot():
    mask = u_shape_mask(64, 64, (32.0, 32.0), 19.0, 16.0, 10.0, 2.0, 12.0)
    # the column through the center is carved near the top of the block
    assert not mask[18:24, 32].any()
    assert mask[40:47, 32].all()


def test_bitten_disk_is_disk_minus_bite():
    full = disk_mask(64, 64, (30.0, 32.0), 17.0)
    bitten = bitten_disk_mask(64, 64, (30.0, 32.0), 17.0, (48.0, 32.0), 9.0)
    assert (bitten <= full).all()
    assert bitten.sum() < full.sum()


def test_star_between_inner_and_outer_disks():
    star = star_mask(64, 64, (32.0, 32.0), 20.0, 13.0)
    inner = disk_mask(64, 64, (32.0, 32.0), 9.0)
    outer = disk_mask(64, 64, (32.0, 32.0), 20.5)
    assert (inner <= star).all()
    assert (star <= outer).all()


def test_random_blob_nonempty_and_bounded(rng):
    for _ in range(50):
        mask = random_blob_mask(rng, 32, 32)
        assert mask.any() and not mask.all()


def test_unknown_size_rejected():
    with pytest.raises(ValueError):
        suite(96)


def test_rectangle_dims():
    mask = rectangle_mask(32, 32, (16.0, 16.0), 5.0, 3.0)
    assert mask.sum() == 11 * 7
    assert isinstance(suite(64)[0], Fixture)
