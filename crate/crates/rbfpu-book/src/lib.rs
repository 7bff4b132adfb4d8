//! Placeholder; chapters are included once the guide exists.
