pub mod contour;
pub mod csv;
pub mod figures;
pub mod roots;
pub mod sweep;
pub mod validate;
