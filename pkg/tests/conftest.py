import pytest

from geospanner.geometry import Point2, SimplePolygon, segments_properly_cross


def _untangle(order, coords, cap=200000):
    m = len(order)
    swaps = 0
    changed = True
    while changed:
        changed = False
        for i in range(m):
            a1 = coords[order[i]]
            a2 = coords[order[(i + 1) % m]]
            for j in range(i + 1, m):
                if j == i or (j + 1) % m == i or (i + 1) % m == j:
                    continue
                b1 = coords[order[j]]
                b2 = coords[order[(j + 1) % m]]
                if segments_properly_cross(a1, a2, b1, b2):
                    order[i + 1:j + 1] = order[i + 1:j + 1][::-1]
                    swaps += 1
                    if swaps > cap:
                        return False
                    changed = True
                    break
            if changed:
                break
    return True


@pytest.fixture(scope="session")
def random_simple_polygon():
    """Factory: random simple ccw polygon with m vertices via 2-opt untangling."""

    def make(rng, m, scale=10.0):
        m = int(m)
        while True:
            coords = [Point2(*p) for p in rng.uniform(0, scale, size=(m, 2))]
            order = list(range(m))
            rng.shuffle(order)
            if not _untangle(order, coords):
                continue
            verts = [coords[i] for i in order]
            poly = SimplePolygon(verts)
            if poly.signed_area() < 0:
                poly = poly.reversed()
            try:
                poly.validate()
            except Exception:
                continue
            return poly

    return make
