"""Build a short two-person exchange straight against the toolkit.

No server and no agent: just tool calls in the order a careful human would
make them, then a look at the resulting timeline.

    python demos/01_two_shot_dialogue.py
"""

from cutscene.toolkit import Toolkit

tk = Toolkit()


def call(tool, **args):
    env = tk.call(tool, args)
    mark = "ok " if env["status"] == "ok" else "ERR"
    print(f"[{mark}] {tool:32s} {env['message']}")
    return env


# Two actors face each other across the origin.
call("add_character", name="ANA", identifier="char_001", location=[-70, 0, 0])
call("add_character", name="BORIS", identifier="char_002", location=[70, 0, 0])
call("orient_character_to_center", names=["ANA", "BORIS"])

# A line of speech: synthesize, then place on the timeline with a matching face track.
tts = call("tts_function_tool", identifier="ana_hello", text="You came back.", gender="female")
length = tts["data"]["duration"]
call("audio_to_face_expression_tool", identifier="ana_hello_face", audio_identifier="ana_hello")
call("add_character_audio", character_name="ANA", identifier="ana_hello", start_time=1.0, end_time=1.0 + length)
call("add_character_facial_animation", character_name="ANA", identifier="ana_hello_face", start_time=1.0)

# A mistake on purpose: BORIS was never given this clip, and the toolkit says so.
call("add_character_audio", character_name="BORIS", identifier="missing_clip", start_time=2.0, end_time=3.0)

# Cameras: a wide shot, then an over-the-shoulder that slowly pushes in.
call("add_camera", camera_name="Wide")
call("apply_camera_template", camera_name="Wide", position_template="Establishing",
     position_args={"actor1_name": "ANA", "actor2_name": "BORIS", "side": "right"}, start_time=0, duration=2)
call("add_camera", camera_name="OverBoris")
call("apply_camera_template", camera_name="OverBoris", position_template="OTS",
     position_args={"from_actor_name": "BORIS", "to_actor_name": "ANA", "variant": "near"},
     movement_template="Dolly", movement_args={"ratio": 0.8}, start_time=2, duration=3)
call("set_active_camera", camera_name="Wide", start_time=0, end_time=2)
call("set_active_camera", camera_name="OverBoris", start_time=2, end_time=5)

doc = call("get_sequence_content")["data"]
print()
print(f"duration {doc['duration']} s at {doc['frame_rate']} fps")
for cut in doc["camera_cuts"]:
    print(f"  cut {cut['start']:>5.2f}-{cut['end']:<5.2f} {cut['camera_name']}")
over = next(b for b in doc["bindings"] if b["name"] == "OverBoris")
print(f"  OverBoris keyframes: {[(k['time'], k['position']) for k in over['keyframes']]}")
