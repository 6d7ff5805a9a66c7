/** Feedback overlays: pure functions from fb/1 artifacts to draw layers.
 *
 * A malformed artifact never yields a blank screen — it becomes an error
 * banner the page renders in place of the overlay. */

import {
  ColorCodingArtifact,
  FB_SCHEMA,
  FeedbackArtifact,
  LIMBS,
  MirrorArtifact,
  PathArrowsArtifact,
  Vec2,
  WireSequence,
} from "./types.js";
import {
  HandZoomOptions,
  LineCommand,
  ViewPreset,
  projectPoint,
  renderSkeleton,
} from "./view.js";

export interface ArrowCommand {
  kind: "arrow";
  joint: number;
  refIndex: number;
  from: Vec2;
  to: Vec2;
}

export interface ErrorBanner {
  kind: "error-banner";
  message: string;
}

export interface SkeletonLayer {
  kind: "skeleton";
  label: string;
  lines: LineCommand[];
}

export interface ViewSwitch {
  kind: "view-switch";
  preset: ViewPreset;
  zoom: HandZoomOptions;
  caption: string;
}

export interface ReplayLayer {
  kind: "replay";
  templateId: string;
  sequence: WireSequence | null;
}

export type OverlayItem =
  | SkeletonLayer
  | ArrowCommand
  | ErrorBanner
  | ViewSwitch
  | ReplayLayer;

export const RED = "#e04040";
export const GREEN = "#40b060";

function banner(message: string): OverlayItem[] {
  return [{ kind: "error-banner", message }];
}

function colorCodingLayer(a: ColorCodingArtifact, frameIndex: number): OverlayItem[] {
  const frame = a.attempt.frames[frameIndex];
  if (!frame) return banner("color_coding artifact has no frames");
  const jointColor = new Map<number, string>();
  for (const [limb, joints] of Object.entries(LIMBS)) {
    const status = a.limb_status[limb];
    for (const j of joints) jointColor.set(j, status === "red" ? RED : GREEN);
  }
  const lines = renderSkeleton(frame, "front", undefined, (bone) => {
    // a bone is tinted by its child joint's limb; untinted bones stay green
    return jointColor.get(bone[1]) ?? jointColor.get(bone[0]) ?? GREEN;
  });
  return [{ kind: "skeleton", label: "attempt", lines }];
}

function pathArrowsLayer(a: PathArrowsArtifact, frameIndex: number): OverlayItem[] {
  if (a.arrows.length === 0) {
    // the service never emits an empty arrow list; treat it as a contract
    // break, visibly
    return banner("path_arrows artifact carried no arrows (contract violation)");
  }
  const frame = a.attempt.frames[frameIndex];
  if (!frame) return banner("path_arrows artifact has no frames");
  const items: OverlayItem[] = [
    { kind: "skeleton", label: "attempt", lines: renderSkeleton(frame, "front") },
  ];
  for (const arrow of a.arrows) {
    items.push({
      kind: "arrow",
      joint: arrow.joint,
      refIndex: arrow.ref_index,
      from: projectPoint(arrow.from, "front", frame),
      to: projectPoint(arrow.to, "front", frame),
    });
  }
  return items;
}

function mirrorLayer(a: MirrorArtifact, pairStep: number): OverlayItem[] {
  if (a.pairs.length === 0) return banner("mirror artifact has no alignment pairs");
  const step = Math.min(Math.max(pairStep, 0), a.pairs.length - 1);
  const [refIdx, attIdx] = a.pairs[step]!;
  const ref = a.reference.frames[refIdx];
  const att = a.attempt.frames[attIdx];
  if (!ref || !att) return banner("mirror pair indexes outside sequences");
  return [
    { kind: "skeleton", label: "reference", lines: renderSkeleton(ref, "front") },
    { kind: "skeleton", label: "attempt", lines: renderSkeleton(att, "front") },
  ];
}

/** Build the overlay for an artifact at a playhead position.
 *
 * position means: frame index for color_coding / path_arrows, alignment
 * pair step for mirror; ignored otherwise. */
export function overlayFeedback(
  artifact: unknown,
  position = 0,
): OverlayItem[] {
  const a = artifact as FeedbackArtifact | null;
  if (!a || typeof a !== "object" || a.schema !== FB_SCHEMA) {
    return banner(`unsupported feedback schema (expected ${FB_SCHEMA})`);
  }
  switch (a.mode) {
    case "recast":
      return [{ kind: "replay", templateId: a.template_id, sequence: a.replay }];
    case "mirror":
      return mirrorLayer(a, position);
    case "path_arrows":
      return pathArrowsLayer(a, position);
    case "color_coding":
      return colorCodingLayer(a, position);
    case "zoom":
      return [{
        kind: "view-switch",
        preset: "hand_zoom",
        zoom: { targetJoint: a.camera.target_joint, distance: a.camera.distance },
        caption: `show ${a.handshape_id} (${a.hand}) at ${a.keyframe_t} ms`,
      }];
    default:
      return banner(`unknown feedback mode ${(a as { mode?: string }).mode}`);
  }
}
