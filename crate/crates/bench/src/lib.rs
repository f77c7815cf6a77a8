//! Empty library target; this package exists to host the criterion
//! benchmarks under `benches/`.
