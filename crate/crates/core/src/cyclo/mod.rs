//! Cyclotomic integers, cyclotomic classes and Gauss periods.

mod cycint;
mod periods;

pub use cycint::{cyclotomic_polynomial, CycInt};
pub use periods::{
    class_index, cyclotomic_number, gauss_period, gauss_periods, gauss_sum_eta, gauss_sum_square,
    period_spectrum, rational_value, ClassHistogram, PeriodSpectrum,
};
