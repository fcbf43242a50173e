"""Community detection by search over the extreme points of a projected label cube."""

from .baselines import KMeansResult, kmeans, les, scr
from .detect import DetectionResult, aep_detect, ep_detect, tie_break
from .graph import Graph, adjacency_matvec, from_edges, largest_connected_component, load_edge_list, load_labels
from .metrics import misclustered_fraction, nmi
from .models import SimConfig, edge_prob_matrix, population_spectrum, sample_dcsbm
from .objectives import BlockCounts, block_counts, flip_update, q_bm, q_dc, q_ex, q_ng
from .spectral import Embedding, embedding, leading_eigenpairs, regularizer_tau
from .zonotope import CandidateSweep, brute_force_vertices, sweep_vertices

__version__ = "0.1.0"
