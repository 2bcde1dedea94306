/*
 * Copyright 2026 The hdrp-model Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HDRP_SAMPLE_HPP
#define HDRP_SAMPLE_HPP

#include "hdrp/scene.hpp"

namespace hdrp
{

/// One rendered observation: the scene parameters and the recorded
/// post-processed value v.
struct SceneSample
{
  SceneParams params;
  ColorTriplet v;
};

} // namespace hdrp

#endif // HDRP_SAMPLE_HPP
