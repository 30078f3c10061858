"""Antipodal sampler tests on analytic surfaces.

Strip pairs, spheres and cylinder walls admit closed-form statements about
which point pairs can pass the friction-cone and width gates, so acceptance
geometry is derived by hand before being asserted.
"""

import json
import math

import httpx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taskgrasp.errors import BackendUnavailable, NoFeasibleGrasp
from taskgrasp.geometry import PointCloud
from taskgrasp.grasp import (
    CandidateSet,
    GripperSpec,
    RemoteGraspSource,
    SamplerSource,
    WIDTH_CLEARANCE,
    sample_grasps,
)
from taskgrasp.scene.catalog import cylinder_side, sphere_shell

GRIPPER = GripperSpec()


def _strip_pair(gap=0.03, pitch=0.002, n=20):
    """Two parallel vertical strips facing each other across ``gap``."""
    ys = np.arange(n) * pitch
    zs = 0.5 + np.arange(n) * pitch
    gy, gz = np.meshgrid(ys, zs)
    left = np.stack([np.zeros(gy.size), gy.ravel(), gz.ravel()], axis=1)
    right = left.copy()
    right[:, 0] = gap
    pts = np.vstack([left, right])
    normals = np.tile([-1.0, 0.0, 0.0], (len(pts), 1))
    return PointCloud(pts, normals=normals)


def _cylinder_cloud(radius=0.015, height=0.08, spacing=0.002):
    pts, nrm = cylinder_side(radius, 0.0, height, spacing=spacing)
    return PointCloud(pts, normals=nrm)


class TestStripPair:
    # Cross-strip pairs have closing axis (gap, dy, dz)/sep with normals
    # +/-X, so the 15 degree cone admits only sqrt(dy^2+dz^2) <= gap*tan(15),
    # bounding separation to [0.030, 0.0311] and width to [0.035, 0.0362].
    def test_width_and_direction_bounds(self):
        cs = sample_grasps(_strip_pair(), GRIPPER, budget=4096, seed=0)
        assert len(cs) > 10
        for g in cs.grasps:
            assert 0.035 - 1e-9 <= g.width <= 0.0362
            assert abs(g.closing_axis @ np.array([1.0, 0.0, 0.0])) >= math.cos(
                math.radians(15.0 + 1e-6)
            )

    def test_best_candidate_is_square_on(self):
        # The strips share a (y, z) lattice, so perfectly aligned pairs
        # exist; the top-scoring candidate should be one of them: width
        # exactly gap + clearance and closing along +/-X within 5 degrees.
        cs = sample_grasps(_strip_pair(), GRIPPER, budget=4096, seed=0)
        best = cs.grasps[0]
        assert best.score == pytest.approx(1.0, abs=1e-9)
        assert best.width == pytest.approx(0.035, abs=1e-9)
        assert abs(best.closing_axis[0]) >= math.cos(math.radians(5.0))

    def test_approach_points_into_scene(self):
        # Facing-strip normals cancel, so the approach falls back to the
        # viewing ray, which for a cloud in front of the camera means a
        # positive Z component.
        cs = sample_grasps(_strip_pair(), GRIPPER, budget=4096, seed=0)
        for g in cs.grasps:
            assert g.approach_axis[2] > 0.0


class TestSphereTooWide:
    def test_large_sphere_yields_nothing(self):
        # On a 0.2 m sphere the cone admits only near-diametric pairs
        # (chord >= 2 * 0.1 * sin 75 = 0.193 m), all wider than the jaws.
        pts, nrm = sphere_shell(0.1, 0.0, math.pi, spacing=0.005, center=(0.0, 0.0, 0.5))
        cloud = PointCloud(pts, normals=nrm)
        with pytest.raises(NoFeasibleGrasp):
            sample_grasps(cloud, GRIPPER, budget=4096, seed=0)


class TestCylinder:
    def test_closing_perpendicular_to_axis(self):
        # Wall normals are horizontal, so accepted closings tilt at most
        # 15 degrees out of the horizontal plane; the best one is nearly
        # diametric and stays within 10 degrees.
        cs = sample_grasps(_cylinder_cloud(), GRIPPER, budget=4096, seed=0)
        assert len(cs) > 10
        axis = np.array([0.0, 0.0, 1.0])
        for g in cs.grasps:
            assert abs(g.closing_axis @ axis) <= math.sin(math.radians(15.0)) + 1e-9
        assert abs(cs.grasps[0].closing_axis @ axis) <= math.sin(math.radians(10.0))

    def test_width_brackets_diameter(self):
        # For wall points at angular gap dt and axial offset dz, the cone
        # admits 2R sin^2(dt/2) / sep >= cos 15 with sep the full chord, so
        # separation lies in [2R cos 15, 2R / cos 15] = [0.028978, 0.031058].
        cs = sample_grasps(_cylinder_cloud(), GRIPPER, budget=4096, seed=0)
        c15 = math.cos(math.radians(15.0))
        for g in cs.grasps:
            sep = g.width - WIDTH_CLEARANCE
            assert 0.03 * c15 - 1e-9 <= sep <= 0.03 / c15 + 1e-9


class TestScore:
    def test_perfect_pinch_scores_one(self):
        # Two points whose shared normal line is the pair axis.
        cloud = PointCloud(
            np.array([[0.0, 0.0, 0.5], [0.03, 0.0, 0.5]]),
            normals=np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]),
        )
        cs = sample_grasps(cloud, GRIPPER, budget=32, seed=0)
        assert len(cs) == 1
        g = cs.grasps[0]
        assert g.score == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(g.translation, [0.015, 0.0, 0.5], atol=1e-12)
        np.testing.assert_allclose(g.approach_axis, [0.0, 0.0, 1.0], atol=1e-12)

    def test_tilted_normals_score_cosine(self):
        # Both normals 10 degrees off the pair axis: score = cos(10 deg).
        c, s = math.cos(math.radians(10.0)), math.sin(math.radians(10.0))
        cloud = PointCloud(
            np.array([[0.0, 0.0, 0.5], [0.03, 0.0, 0.5]]),
            normals=np.array([[c, 0.0, s], [c, 0.0, -s]]),
        )
        cs = sample_grasps(cloud, GRIPPER, budget=32, seed=0)
        assert cs.grasps[0].score == pytest.approx(c, abs=1e-9)


class TestContract:
    def test_deterministic_bytes(self):
        a = sample_grasps(_strip_pair(), GRIPPER, budget=512, seed=7)
        b = sample_grasps(_strip_pair(), GRIPPER, budget=512, seed=7)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())

    def test_sorted_by_score_then_translation(self):
        cs = sample_grasps(_cylinder_cloud(), GRIPPER, budget=4096, seed=3)
        for a, b in zip(cs.grasps, cs.grasps[1:]):
            assert a.score >= b.score
            if a.score == b.score:
                assert tuple(a.translation) <= tuple(b.translation)

    def test_contacts_line_up_with_grasps(self):
        cs = sample_grasps(_cylinder_cloud(), GRIPPER, budget=2048, seed=1)
        assert cs.contacts.shape == (len(cs), 2, 3)
        for g, (pi, pj) in zip(cs.grasps, cs.contacts):
            np.testing.assert_allclose(0.5 * (pi + pj), g.translation, atol=1e-12)
            d = pj - pi
            np.testing.assert_allclose(
                d / np.linalg.norm(d), g.closing_axis, atol=1e-9
            )
            assert g.width == pytest.approx(np.linalg.norm(d) + WIDTH_CLEARANCE, abs=1e-12)

    def test_round_trip(self):
        cs = sample_grasps(_strip_pair(), GRIPPER, budget=256, seed=2, source_cloud_id="s1")
        back = CandidateSet.from_dict(cs.to_dict())
        assert json.dumps(back.to_dict()) == json.dumps(cs.to_dict())

    def test_empty_cloud_and_bad_budget(self):
        with pytest.raises(NoFeasibleGrasp):
            sample_grasps(PointCloud(np.zeros((0, 3))), GRIPPER, budget=16)
        with pytest.raises(ValueError):
            sample_grasps(_strip_pair(), GRIPPER, budget=0)

    def test_missing_normals_rejected(self):
        with pytest.raises(ValueError):
            sample_grasps(PointCloud(np.zeros((5, 3)) + [0, 0, 0.5]), GRIPPER)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), n=st.integers(8, 120))
    def test_score_and_width_bounds_on_random_clouds(self, seed, n):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-0.04, 0.04, size=(n, 3)) + [0.0, 0.0, 0.5]
        nrm = rng.normal(size=(n, 3))
        nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
        try:
            cs = sample_grasps(PointCloud(pts, normals=nrm), GRIPPER, budget=128, seed=seed)
        except NoFeasibleGrasp:
            return
        for g in cs.grasps:
            assert -1e-12 <= g.score <= 1.0 + 1e-12
            assert g.width <= GRIPPER.max_width + WIDTH_CLEARANCE + 1e-12


class TestSamplerSource:
    def test_small_region_is_an_outcome_not_an_error(self):
        cloud = PointCloud(np.array([[0.0, 0.0, 0.5], [0.01, 0.0, 0.5], [0.0, 0.01, 0.5]]))
        with pytest.raises(NoFeasibleGrasp):
            SamplerSource().propose(cloud, GRIPPER)

    def test_degenerate_region_reports_no_grasp(self):
        line = np.stack(
            [np.linspace(0.0, 0.05, 12), np.zeros(12), np.full(12, 0.5)], axis=1
        )
        with pytest.raises(NoFeasibleGrasp):
            SamplerSource().propose(PointCloud(line), GRIPPER)

    def test_estimates_normals_then_samples(self):
        bare = PointCloud(_strip_pair().points)
        cs = SamplerSource(budget=2048, seed=0).propose(bare, GRIPPER)
        assert len(cs) > 0
        for g in cs.grasps:
            assert g.width <= GRIPPER.max_width + WIDTH_CLEARANCE + 1e-12


class _FakeResponse:
    def __init__(self, payload, status=200):
        self._payload = payload
        self._status = status

    def raise_for_status(self):
        if self._status >= 400:
            raise httpx.HTTPStatusError("boom", request=None, response=None)

    def json(self):
        return self._payload


def _grasp_entry(x, score, width=0.03):
    return {
        "rotation": np.eye(3).tolist(),
        "translation": [x, 0.0, 0.5],
        "width": width,
        "score": score,
    }


class TestRemoteGraspSource:
    def test_request_shape_and_resorting(self, monkeypatch):
        seen = {}

        def fake_post(url, json=None, timeout=None):
            seen["url"] = url
            seen["body"] = json
            return _FakeResponse(
                {"grasps": [_grasp_entry(0.02, 0.4), _grasp_entry(0.01, 0.9)]}
            )

        monkeypatch.setattr(httpx, "post", fake_post)
        cloud = PointCloud(np.array([[0.0, 0.0, 0.5], [0.01, 0.0, 0.5]]))
        cs = RemoteGraspSource("http://grasp.local/").propose(cloud, GRIPPER)
        assert seen["url"] == "http://grasp.local/grasps"
        assert seen["body"]["count"] == 2
        import base64

        wire = np.frombuffer(
            base64.b64decode(seen["body"]["points_b64"]), dtype="<f8"
        ).reshape(-1, 3)
        np.testing.assert_allclose(wire, cloud.points, atol=0)
        # Wire order was worst-first; the set must come back best-first.
        assert [g.score for g in cs.grasps] == [0.9, 0.4]

    def test_invalid_pose_is_a_backend_fault(self, monkeypatch):
        monkeypatch.setattr(
            httpx, "post",
            lambda *a, **k: _FakeResponse({"grasps": [_grasp_entry(0.0, 0.5, width=0.2)]}),
        )
        cloud = PointCloud(np.array([[0.0, 0.0, 0.5]]))
        with pytest.raises(BackendUnavailable):
            RemoteGraspSource("http://grasp.local").propose(cloud, GRIPPER)

    def test_zero_candidates(self, monkeypatch):
        monkeypatch.setattr(httpx, "post", lambda *a, **k: _FakeResponse({"grasps": []}))
        cloud = PointCloud(np.array([[0.0, 0.0, 0.5]]))
        with pytest.raises(NoFeasibleGrasp):
            RemoteGraspSource("http://grasp.local").propose(cloud, GRIPPER)

    def test_transport_error(self, monkeypatch):
        def fake_post(*a, **k):
            raise httpx.ConnectError("no route")

        monkeypatch.setattr(httpx, "post", fake_post)
        cloud = PointCloud(np.array([[0.0, 0.0, 0.5]]))
        with pytest.raises(BackendUnavailable):
            RemoteGraspSource("http://grasp.local").propose(cloud, GRIPPER)
