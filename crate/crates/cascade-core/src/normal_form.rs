//! Homological equation and the first averaging step (stub).
