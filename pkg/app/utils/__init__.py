"""Special functions, small linear algebra and grid helpers."""
