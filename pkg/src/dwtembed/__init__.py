"""Wavelet-based word-embedding compression and DWT-DCT sentence encoding."""

from .compress import CompressionSpec, average_words, compress_table, compress_word, output_dim, random_pool
from .dct import dct_columns, dct_ii, idct
from .embeddings import EmbeddingTable, load_embeddings, lookup, save_embeddings
from .sentence import SentenceEncoderConfig, encode, encode_avg, encode_tokens, sentence_dim
from .wavelet import FILTER_NAMES, WaveletFilter, dwt_1d, idwt_1d, make_filter, packet_level, packet_node

__version__ = "0.1.0"
