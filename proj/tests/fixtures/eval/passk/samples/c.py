date_time = DateTime.resolve_from_text('tomorrow at 9')
content = Content.resolve_from_text('call dad')
Reminders.create_reminder(date_time=date_time, content=content)
