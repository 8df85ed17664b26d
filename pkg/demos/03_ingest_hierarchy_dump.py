"""Parse a captured view-hierarchy dump into a screen record.

The parser consumes uiautomator-style XML: nested <node> elements with
class and bounds="[l,t][r,b]" attributes. Merge rules fold
MultiAutoCompleteTextView into EditText and ImageButton into Button;
date/time pickers are dropped; WebView-dominated and trivial screens are
filtered; duplicates collapse by component-sequence hash.
"""

from wae.ingest import ingest_dumps, map_class, parse_dump, extract_screen

DUMP = b"""<?xml version='1.0' encoding='UTF-8'?>
<hierarchy rotation="0">
  <node class="android.widget.FrameLayout" bounds="[0,0][1080,1920]">
    <node class="android.widget.TextView" bounds="[0,0][1080,150]"/>
    <node class="android.widget.ListView" bounds="[0,150][1080,1500]">
      <node class="android.widget.ImageButton" bounds="[24,174][168,318]"/>
      <node class="android.widget.TextView" bounds="[192,174][1056,318]"/>
      <node class="android.widget.MultiAutoCompleteTextView" bounds="[24,342][1056,486]"/>
      <node class="android.widget.DatePicker" bounds="[24,510][1056,654]"/>
    </node>
    <node class="android.widget.Button" bounds="[240,1600][840,1780]" visible-to-user="true"/>
    <node class="android.widget.ProgressBar" bounds="[0,1800][1080,1850]" visible-to-user="false"/>
  </node>
</hierarchy>"""

tree = parse_dump(DUMP)
screen = extract_screen(tree, "demo-screen")
print(f"extracted {len(screen.components)} components from the dump:")
for comp in screen.components:
    print(f"  {comp.ctype.name:<10} {comp.bounds}")

# what happened to each interesting class:
for cls in (
    "android.widget.ImageButton",
    "android.widget.MultiAutoCompleteTextView",
    "android.widget.DatePicker",
    "com.example.FancyWidget",
):
    print(f"{cls.split('.')[-1]:<26} -> {map_class(cls).result.value}")

# the full pipeline with dedup (same dump twice):
screens, report = ingest_dumps([("a", DUMP), ("a-again", DUMP)])
print(f"\npipeline kept {len(screens)} screen(s); report: {report.to_dict()}")
