#pragma once

#include "fqr/atlas.hpp"
#include "fqr/error.hpp"
#include "fqr/field.hpp"
#include "fqr/framed_rep.hpp"
#include "fqr/matrix.hpp"
#include "fqr/normal_form.hpp"
#include "fqr/oracle.hpp"
#include "fqr/quiver.hpp"
#include "fqr/random.hpp"
#include "fqr/skeleton.hpp"
