//! Time stepping (stub).
