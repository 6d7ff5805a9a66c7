import { describe, expect, it } from "vitest";
import {
  ArrowCommand,
  ErrorBanner,
  GREEN,
  RED,
  SkeletonLayer,
  ViewSwitch,
  overlayFeedback,
} from "../src/overlay.js";
import {
  ColorCodingArtifact,
  JOINT,
  LIMBS,
  MirrorArtifact,
  PathArrowsArtifact,
  RecastArtifact,
  ZoomArtifact,
} from "../src/types.js";
import { projectPoint } from "../src/view.js";
import { tPoseFrame, tPoseSequence } from "./fixtures.js";

function skeletons(items: ReturnType<typeof overlayFeedback>): SkeletonLayer[] {
  return items.filter((i): i is SkeletonLayer => i.kind === "skeleton");
}

function banners(items: ReturnType<typeof overlayFeedback>): ErrorBanner[] {
  return items.filter((i): i is ErrorBanner => i.kind === "error-banner");
}

describe("color coding overlay", () => {
  const artifact: ColorCodingArtifact = {
    schema: "fb/1",
    mode: "color_coding",
    attempt: tPoseSequence(2),
    limb_status: { left_arm: "green", right_arm: "red", torso: "green", head: "green" },
  };

  it("tints exactly the right-arm bones red and everything else green", () => {
    const [layer] = skeletons(overlayFeedback(artifact));
    expect(layer).toBeDefined();
    const rightArm = new Set(LIMBS.right_arm);
    for (const line of layer!.lines) {
      const inRightArm = rightArm.has(line.bone[1]) || rightArm.has(line.bone[0]);
      expect(line.color).toBe(inRightArm ? RED : GREEN);
    }
    const redCount = layer!.lines.filter((l) => l.color === RED).length;
    expect(redCount).toBe(4); // shoulder->elbow->wrist->hand chain + collar bone
  });
});

describe("path arrows overlay", () => {
  const frame = tPoseFrame();
  const artifact: PathArrowsArtifact = {
    schema: "fb/1",
    mode: "path_arrows",
    attempt: { rate_hz: 10, frames: [frame] },
    arrows: [
      { joint: JOINT.WRIST_RIGHT, ref_index: 4, from: [1.3, 1.0, 0], to: [1.3, 1.4, 0] },
      { joint: JOINT.HAND_RIGHT, ref_index: 9, from: [1.5, 1.0, 0], to: [1.2, 1.2, 0] },
    ],
  };

  it("draws each arrow at the projected from/to positions", () => {
    const items = overlayFeedback(artifact);
    const arrows = items.filter((i): i is ArrowCommand => i.kind === "arrow");
    expect(arrows).toHaveLength(2);
    arrows.forEach((cmd, i) => {
      const src = artifact.arrows[i]!;
      expect(cmd.joint).toBe(src.joint);
      expect(cmd.refIndex).toBe(src.ref_index);
      expect(cmd.from).toEqual(projectPoint(src.from, "front", frame));
      expect(cmd.to).toEqual(projectPoint(src.to, "front", frame));
    });
    expect(skeletons(items)).toHaveLength(1);
  });

  it("turns an empty arrow list into an error banner, never a blank screen", () => {
    const items = overlayFeedback({ ...artifact, arrows: [] });
    expect(items.length).toBeGreaterThan(0);
    expect(banners(items)).toHaveLength(1);
    expect(banners(items)[0]!.message).toMatch(/no arrows/);
  });
});

describe("mirror overlay", () => {
  const artifact: MirrorArtifact = {
    schema: "fb/1",
    mode: "mirror",
    reference: tPoseSequence(4),
    attempt: tPoseSequence(3),
    pairs: [[0, 0], [1, 1], [2, 1], [3, 2]],
  };

  it("steps both skeletons in lockstep through the alignment pairs", () => {
    for (let step = 0; step < artifact.pairs.length; step++) {
      const layers = skeletons(overlayFeedback(artifact, step));
      expect(layers.map((l) => l.label)).toEqual(["reference", "attempt"]);
      const [refIdx, attIdx] = artifact.pairs[step]!;
      // the rendered frames carry the timestamps of the paired indices
      expect(layers[0]!.lines[0]!.from).toEqual(
        projectPoint(artifact.reference.frames[refIdx]!.joints[0]!, "front",
          artifact.reference.frames[refIdx]!));
      expect(layers[1]!.lines[0]!.from).toEqual(
        projectPoint(artifact.attempt.frames[attIdx]!.joints[0]!, "front",
          artifact.attempt.frames[attIdx]!));
    }
  });

  it("clamps out-of-range steps instead of failing", () => {
    expect(skeletons(overlayFeedback(artifact, 99))).toHaveLength(2);
    expect(skeletons(overlayFeedback(artifact, -5))).toHaveLength(2);
  });

  it("banners when a pair points outside a sequence", () => {
    const broken = { ...artifact, pairs: [[0, 50]] as [number, number][] };
    expect(banners(overlayFeedback(broken, 0))).toHaveLength(1);
  });
});

describe("recast and zoom overlays", () => {
  it("recast yields a replay layer for the reference template", () => {
    const artifact: RecastArtifact = {
      schema: "fb/1",
      mode: "recast",
      template_id: "wave",
      replay: tPoseSequence(2),
    };
    const items = overlayFeedback(artifact);
    expect(items).toHaveLength(1);
    expect(items[0]).toMatchObject({ kind: "replay", templateId: "wave" });
  });

  it("zoom switches the view to hand_zoom on the camera target", () => {
    const artifact: ZoomArtifact = {
      schema: "fb/1",
      mode: "zoom",
      hand: "R",
      handshape_id: "spread-5",
      keyframe_t: 800,
      camera: { target_joint: JOINT.HAND_RIGHT, distance: 0.3 },
    };
    const [item] = overlayFeedback(artifact) as ViewSwitch[];
    expect(item).toMatchObject({
      kind: "view-switch",
      preset: "hand_zoom",
      zoom: { targetJoint: JOINT.HAND_RIGHT, distance: 0.3 },
    });
    expect(item!.caption).toContain("spread-5");
  });
});

describe("malformed artifacts", () => {
  it("banners on a schema mismatch", () => {
    const items = overlayFeedback({ schema: "fb/2", mode: "recast" });
    expect(banners(items)).toHaveLength(1);
    expect(banners(items)[0]!.message).toContain("fb/1");
  });

  it("banners on an unknown mode", () => {
    const items = overlayFeedback({ schema: "fb/1", mode: "hologram" });
    expect(banners(items)).toHaveLength(1);
  });

  it("banners on null input", () => {
    expect(banners(overlayFeedback(null))).toHaveLength(1);
  });
});
