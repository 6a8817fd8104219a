//! Spectral diagnostics (stub).
