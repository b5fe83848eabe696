pub mod certify;
pub mod exactnum;
pub mod floquet;
pub mod laurent;
pub mod models;
pub mod spectral;
