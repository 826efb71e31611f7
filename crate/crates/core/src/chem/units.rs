//! Unit conversions to atomic units.

pub const BOHR_PER_ANGSTROM: f64 = 1.8897259886;
pub const EV_PER_HARTREE: f64 = 27.211386245988;

pub fn angstrom_to_bohr(x: f64) -> f64 {
    x * BOHR_PER_ANGSTROM
}

pub fn bohr_to_angstrom(x: f64) -> f64 {
    x / BOHR_PER_ANGSTROM
}

pub fn ev_to_hartree(e: f64) -> f64 {
    e / EV_PER_HARTREE
}

pub fn hartree_to_ev(e: f64) -> f64 {
    e * EV_PER_HARTREE
}
