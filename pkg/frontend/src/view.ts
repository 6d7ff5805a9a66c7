/** View presets and headless skeleton rendering.
 *
 * Coordinates follow the service's normalized body frame: x right, y up,
 * z increasing away from the viewer (the body faces -z).  Rendering is a
 * pure function from (frame, preset) to draw commands, so tests can assert
 * projection geometry without a canvas. */

import { BONES, JOINT, N_JOINTS, Vec2, Vec3, WireFrame, WireSequence } from "./types.js";

export type ViewPreset = "front" | "side" | "over_shoulder" | "hand_zoom";

export const VIEW_PRESETS: ReadonlyArray<ViewPreset> = [
  "front", "side", "over_shoulder", "hand_zoom",
];

export interface HandZoomOptions {
  targetJoint: number;
  /** Camera distance in normalized units; magnification is 1/distance. */
  distance: number;
}

export interface LineCommand {
  kind: "line";
  bone: readonly [number, number];
  from: Vec2;
  to: Vec2;
  color: string;
}

export const DEFAULT_BONE_COLOR = "#d0d0d0";

/** Project one world point under the preset camera.
 *
 * front: head-on orthographic (screen x = world x, y = world y).
 * side: from the body's right (+x) looking left, so depth (z) becomes
 *   the horizontal axis and the shoulder line collapses.
 * over_shoulder: camera behind and to the right of the head, looking
 *   forward past the body (-z); left/right flip because we see the back.
 * hand_zoom: orthographic centered on the target joint, magnified by the
 *   inverse camera distance.
 */
export function projectPoint(
  p: Vec3,
  preset: ViewPreset,
  frame: WireFrame,
  zoom?: HandZoomOptions,
): Vec2 {
  switch (preset) {
    case "front":
      return [p[0], p[1]];
    case "side":
      return [-p[2], p[1]];
    case "over_shoulder": {
      const head = frame.joints[JOINT.HEAD] ?? [0, 0, 0];
      // behind-right of the head: small lateral offset keeps the near
      // shoulder from occluding the signing space
      const offsetX = 0.25;
      return [-(p[0] - head[0] - offsetX), p[1]];
    }
    case "hand_zoom": {
      if (!zoom) throw new Error("hand_zoom requires HandZoomOptions");
      const target = frame.joints[zoom.targetJoint];
      if (!target) throw new Error(`no joint ${zoom.targetJoint} in frame`);
      const scale = 1 / zoom.distance;
      return [(p[0] - target[0]) * scale, (p[1] - target[1]) * scale];
    }
  }
}

/** Render one frame of the stick figure as line draw commands. */
export function renderSkeleton(
  frame: WireFrame,
  preset: ViewPreset,
  zoom?: HandZoomOptions,
  colorOf?: (bone: readonly [number, number]) => string,
): LineCommand[] {
  if (frame.joints.length !== N_JOINTS) {
    throw new Error(`frame must carry ${N_JOINTS} joints, got ${frame.joints.length}`);
  }
  return BONES.map((bone) => {
    const [a, b] = bone;
    return {
      kind: "line" as const,
      bone,
      from: projectPoint(frame.joints[a]!, preset, frame, zoom),
      to: projectPoint(frame.joints[b]!, preset, frame, zoom),
      color: colorOf ? colorOf(bone) : DEFAULT_BONE_COLOR,
    };
  });
}

/** Frame index for a playhead time, clamping to the last valid frame so
 * degenerate playheads render the last pose rather than nothing. */
export function frameAt(sequence: WireSequence, playheadMs: number): WireFrame {
  const frames = sequence.frames;
  if (frames.length === 0) throw new Error("empty sequence");
  let best = frames[0]!;
  for (const f of frames) {
    if (f.t <= playheadMs) best = f;
    else break;
  }
  return best;
}
