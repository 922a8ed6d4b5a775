//! CMOS power models.
//!
//! Dynamic power is `tau * C_L * V_dd^k * f` where `k` is 1 (linear supply
//! term) or 2 (the usual `C V^2 f` form). Static power is the diode leakage
//! current times the supply voltage.

use crate::error::{Error, Result};

/// Elementary charge, coulombs.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Largest `qV/kT` accepted before `exp` is considered out of range.
pub const MAX_EXPONENT: f64 = 700.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VoltageExponent {
    #[default]
    Linear,
    Quadratic,
}

impl VoltageExponent {
    pub fn from_power(p: u32) -> Result<Self> {
        match p {
            1 => Ok(VoltageExponent::Linear),
            2 => Ok(VoltageExponent::Quadratic),
            _ => Err(Error::ParameterRange {
                name: "vdd exponent",
                value: p as f64,
                expected: "1 or 2",
            }),
        }
    }

    pub fn power(self) -> i32 {
        match self {
            VoltageExponent::Linear => 1,
            VoltageExponent::Quadratic => 2,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::ParameterRange {
            name,
            value,
            expected: "finite and > 0",
        })
    }
}

fn unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::ParameterRange {
            name,
            value,
            expected: "within [0, 1]",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicPowerParams {
    tau: f64,
    load_capacitance: f64,
    supply_voltage: f64,
    frequency: f64,
    voltage_exponent: VoltageExponent,
}

impl DynamicPowerParams {
    pub fn new(
        tau: f64,
        load_capacitance: f64,
        supply_voltage: f64,
        frequency: f64,
        voltage_exponent: VoltageExponent,
    ) -> Result<Self> {
        Ok(DynamicPowerParams {
            tau: unit_interval("tau", tau)?,
            load_capacitance: positive("load capacitance", load_capacitance)?,
            supply_voltage: positive("supply voltage", supply_voltage)?,
            frequency: positive("frequency", frequency)?,
            voltage_exponent,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Average dynamic power in watts.
pub fn dynamic_power(p: &DynamicPowerParams) -> f64 {
    p.tau * p.load_capacitance * p.supply_voltage.powi(p.voltage_exponent.power()) * p.frequency
}

/// Diode leakage `i_s * (exp(qV / kT) - 1)` in amperes.
pub fn leakage_current(
    saturation_current: f64,
    diode_voltage: f64,
    temperature: f64,
) -> Result<f64> {
    positive("saturation current", saturation_current)?;
    positive("temperature", temperature)?;
    if !diode_voltage.is_finite() {
        return Err(Error::ParameterRange {
            name: "diode voltage",
            value: diode_voltage,
            expected: "finite",
        });
    }
    let x = ELEMENTARY_CHARGE * diode_voltage / (BOLTZMANN * temperature);
    if x > MAX_EXPONENT {
        return Err(Error::ParameterRange {
            name: "qV/kT",
            value: x,
            expected: "<= 700",
        });
    }
    Ok(saturation_current * x.exp_m1())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticPowerParams {
    pub saturation_current: f64,
    pub diode_voltage: f64,
    pub temperature: f64,
    pub supply_voltage: f64,
}

/// Leakage current times supply voltage, in watts.
pub fn static_power(p: &StaticPowerParams) -> Result<f64> {
    let leak = leakage_current(p.saturation_current, p.diode_voltage, p.temperature)?;
    Ok(leak * positive("supply voltage", p.supply_voltage)?)
}

/// Static power for several devices sharing one supply: leakage currents are
/// summed first, then multiplied by the supply voltage.
pub fn static_power_total(leakage_currents: &[f64], supply_voltage: f64) -> Result<f64> {
    Ok(leakage_currents.iter().sum::<f64>() * positive("supply voltage", supply_voltage)?)
}

/// Watts to microwatts.
pub fn to_microwatts(watts: f64) -> f64 {
    watts * 1e6
}
