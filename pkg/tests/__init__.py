# Tests for symdom
