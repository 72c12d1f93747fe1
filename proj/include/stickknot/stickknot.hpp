#pragma once

#include "stickknot/bounds.hpp"
#include "stickknot/bracket.hpp"
#include "stickknot/classifier.hpp"
#include "stickknot/constructions.hpp"
#include "stickknot/diagram.hpp"
#include "stickknot/diagram_json.hpp"
#include "stickknot/error.hpp"
#include "stickknot/geom.hpp"
#include "stickknot/identify.hpp"
#include "stickknot/knotbase.hpp"
#include "stickknot/pd.hpp"
#include "stickknot/svg.hpp"
