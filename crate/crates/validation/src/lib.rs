//! Holds the `acceptance` test target, which checks the model against its
//! reference values and Monte Carlo oracle. Run with
//! `cargo test -p acqtime-validation --test acceptance`.
