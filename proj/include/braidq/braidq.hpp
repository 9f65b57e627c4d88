// Umbrella header: the full public surface.
#pragma once

#include <braidq/abelian.hpp>
#include <braidq/coeff.hpp>
#include <braidq/geom.hpp>
#include <braidq/ncalg.hpp>
#include <braidq/parse.hpp>
#include <braidq/rewrite.hpp>
#include <braidq/spinops.hpp>
#include <braidq/suq2.hpp>
#include <braidq/verify.hpp>
