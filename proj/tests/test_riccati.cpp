#include "catch_amalgamated.hpp"

TEST_CASE("placeholder test_riccati") { SUCCEED(); }
