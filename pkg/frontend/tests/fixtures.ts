import { JOINT, N_JOINTS, Vec3, WireFrame, WireSequence } from "../src/types.js";

/** A normalized T-pose: arms straight out along x, body on the x=0 plane
 * except the limbs, mirrored left/right. */
export function tPoseFrame(t = 0): WireFrame {
  const joints: Vec3[] = new Array(N_JOINTS).fill(null).map(() => [0, 0, 0]);
  const set = (j: number, x: number, y: number, z: number) => {
    joints[j] = [x, y, z];
  };
  set(JOINT.HIP_CENTER, 0, 0, 0);
  set(JOINT.SPINE, 0, 0.5, 0);
  set(JOINT.SHOULDER_CENTER, 0, 1.0, 0);
  set(JOINT.HEAD, 0, 1.3, 0);
  set(JOINT.SHOULDER_LEFT, -0.5, 1.0, 0);
  set(JOINT.ELBOW_LEFT, -0.9, 1.0, 0);
  set(JOINT.WRIST_LEFT, -1.3, 1.0, 0);
  set(JOINT.HAND_LEFT, -1.5, 1.0, 0);
  set(JOINT.SHOULDER_RIGHT, 0.5, 1.0, 0);
  set(JOINT.ELBOW_RIGHT, 0.9, 1.0, 0);
  set(JOINT.WRIST_RIGHT, 1.3, 1.0, 0);
  set(JOINT.HAND_RIGHT, 1.5, 1.0, 0);
  set(JOINT.HIP_LEFT, -0.2, 0, 0);
  set(JOINT.KNEE_LEFT, -0.2, -0.8, 0);
  set(JOINT.ANKLE_LEFT, -0.2, -1.6, 0);
  set(JOINT.FOOT_LEFT, -0.2, -1.7, -0.2);
  set(JOINT.HIP_RIGHT, 0.2, 0, 0);
  set(JOINT.KNEE_RIGHT, 0.2, -0.8, 0);
  set(JOINT.ANKLE_RIGHT, 0.2, -1.6, 0);
  set(JOINT.FOOT_RIGHT, 0.2, -1.7, -0.2);
  return { t, joints, tracked: new Array(N_JOINTS).fill(true) };
}

export function tPoseSequence(frameCount = 3, stepMs = 100): WireSequence {
  return {
    rate_hz: 1000 / stepMs,
    frames: Array.from({ length: frameCount }, (_, i) => tPoseFrame(i * stepMs)),
  };
}

/** Mirror pairs of joints across the body's vertical axis. */
export const MIRROR_PAIRS: ReadonlyArray<readonly [number, number]> = [
  [JOINT.SHOULDER_LEFT, JOINT.SHOULDER_RIGHT],
  [JOINT.ELBOW_LEFT, JOINT.ELBOW_RIGHT],
  [JOINT.WRIST_LEFT, JOINT.WRIST_RIGHT],
  [JOINT.HAND_LEFT, JOINT.HAND_RIGHT],
  [JOINT.HIP_LEFT, JOINT.HIP_RIGHT],
  [JOINT.KNEE_LEFT, JOINT.KNEE_RIGHT],
  [JOINT.ANKLE_LEFT, JOINT.ANKLE_RIGHT],
  [JOINT.FOOT_LEFT, JOINT.FOOT_RIGHT],
];
