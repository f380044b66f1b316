//! Sun ephemeris, building shadows on the hover plane and the sunny
//! hover-spot search around building corners.

mod ephemeris;
mod shadow;
mod sunny;

pub use ephemeris::{sun_position, SunPosition};
pub use shadow::{bearing_vector, is_sunny, shadow_length, shadow_polygon, ShadowMap, ShadowPolygon};
pub use sunny::{
    candidate_grid, find_sunny_points, find_sunny_points_in, interior_anchor, SearchParams, SunnyPoint,
    SunnyPointSet,
};
