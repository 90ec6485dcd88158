import numpy as np
import pytest

from mcrank import CandidateSet

# Five-candidate restaurant example used as the golden fixture throughout:
# known-good scores for every method were derived by hand and verified
# against the brute-force oracle before being frozen here.
GOLDEN_VECTORS = (
    ("T1", (5.0, 5.0, 5.0)),
    ("T2", (4.0, 4.0, 4.0)),
    ("T3", (3.0, 3.0, 3.0)),
    ("T4", (4.0, 3.0, 3.0)),
    ("T5", (4.0, 5.0, 3.0)),
)

GOLDEN_PR = [4.0, 2.0, 0.0, 1.0, 2.0]
GOLDEN_KD1 = [4.0, 3.0, 0.0, 1.0, 3.0]
GOLDEN_AR = [3.5, 8.0, 13.5, 11.5, 8.5]
GOLDEN_MR = [1.0, 2.0, 4.0, 3.0, 1.5]
GOLDEN_GD = [17.0, 6.0, 0.0, 1.0, 6.0]
GOLDEN_PG = [6.0, 0.0, -6.0, -4.0, 0.0]
GOLDEN_HYBRID_PR_AR = [4.8, 2.6, 0.0, 1.2, 2.4]
GOLDEN_HYBRID_PR_PG = [4.8, 2.5, 0.0, 1.2, 2.5]


@pytest.fixture
def five_candidates() -> CandidateSet:
    return CandidateSet.from_pairs("u1", GOLDEN_VECTORS)


def random_candidate_set(rng: np.random.Generator, *, max_n: int = 15,
                         max_m: int = 5, integer: bool = True,
                         min_n: int = 1) -> CandidateSet:
    n = int(rng.integers(min_n, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    if integer:
        matrix = rng.integers(1, 6, size=(n, m)).astype(np.float64)
    else:
        matrix = rng.uniform(1.0, 5.0, size=(n, m))
    ids = tuple(f"i{j:04d}" for j in range(n))
    return CandidateSet(user_id="u", item_ids=ids, matrix=matrix)
