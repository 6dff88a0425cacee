people = [("ada", 36), ("alan", 41), ("grace", 85)]
people.sort(key=lambda p: (-p[1], p[0]))
oldest = max(people, key=lambda p: p[1])
print(oldest)
